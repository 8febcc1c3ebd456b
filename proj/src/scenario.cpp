#include "contactflow/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace contactflow {

namespace {

using nlohmann::json;

constexpr double kHConservationTol = 1e-8;
constexpr double kResidualTol = 1e-6;
constexpr double kInteractingGasLawTol = 1e-8;
constexpr double kEnergyConservationTol = 1e-8;
constexpr double kEntropyProductionTol = 1e-6;
constexpr double kDegeneracyTol = 1e-12;
constexpr double kGeometricHjTol = 1e-10;
constexpr double kLiftEquivalenceTol = 1e-7;
constexpr double kLiftTangencyTol = 1e-6;

[[noreturn]] void parse_fail(const std::string& field, const std::string& why)
{
    throw ScenarioParseError(field + ": " + why);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed)
{
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            parse_fail(where.empty() ? item.key() : where + "." + item.key(),
                       "unknown field");
}

double get_number(const json& obj, const std::string& field, double fallback)
{
    if (!obj.contains(field))
        return fallback;
    if (!obj[field].is_number())
        parse_fail(field, "must be a number");
    return obj[field].get<double>();
}

Eigen::MatrixXd parse_matrix(const json& value, const std::string& field)
{
    if (!value.is_array() || value.empty())
        parse_fail(field, "must be a non-empty array of rows");
    const std::size_t rows = value.size();
    Eigen::MatrixXd m;
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = value[r];
        if (!row.is_array())
            parse_fail(field, "row " + std::to_string(r) + " is not an array");
        if (r == 0)
            m.resize(static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(row.size()));
        if (row.size() != static_cast<std::size_t>(m.cols()))
            parse_fail(field, "rows have inconsistent lengths");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number())
                parse_fail(field, "entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                row[c].get<double>();
        }
    }
    if (m.rows() != m.cols())
        parse_fail(field, "must be square");
    return m;
}

ScalarField parse_field_spec(const json& spec, const std::string& field, int dim)
{
    if (!spec.is_object())
        parse_fail(field, "must be an object with quadratic/linear/constant");
    require_keys(spec, field, {"quadratic", "linear", "constant"});
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    Vec b(static_cast<std::size_t>(dim), 0.0);
    double c = 0.0;
    if (spec.contains("quadratic")) {
        A = parse_matrix(spec["quadratic"], field + ".quadratic");
        if (A.rows() != dim)
            parse_fail(field + ".quadratic", "dimension mismatch");
    }
    if (spec.contains("linear")) {
        const json& lin = spec["linear"];
        if (!lin.is_array() || lin.size() != static_cast<std::size_t>(dim))
            parse_fail(field + ".linear", "must be an array of length dim");
        for (std::size_t i = 0; i < lin.size(); ++i) {
            if (!lin[i].is_number())
                parse_fail(field + ".linear", "entries must be numbers");
            b[i] = lin[i].get<double>();
        }
    }
    if (spec.contains("constant")) {
        if (!spec["constant"].is_number())
            parse_fail(field + ".constant", "must be a number");
        c = spec["constant"].get<double>();
    }
    return quadratic_field(A, b, c);
}

OCSystem parse_oc_system(const json& oc)
{
    require_keys(oc, "oc", {"dim", "J", "M", "E", "S", "beta"});
    if (!oc.contains("J") || !oc.contains("M"))
        parse_fail("oc", "J and M are required");
    const Eigen::MatrixXd J = parse_matrix(oc["J"], "oc.J");
    const Eigen::MatrixXd M = parse_matrix(oc["M"], "oc.M");
    const int dim = static_cast<int>(J.rows());
    if (M.rows() != dim)
        parse_fail("oc.M", "dimension mismatch with J");
    if (oc.contains("dim") && oc["dim"].get<int>() != dim)
        parse_fail("oc.dim", "does not match the matrix dimensions");
    if ((J + J.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        parse_fail("oc.J", "J must be antisymmetric");
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        parse_fail("oc.M", "M must be symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.eigenvalues().minCoeff() < -1e-12)
        parse_fail("oc.M", "M must be positive semidefinite");
    if (!oc.contains("E") || !oc.contains("S"))
        parse_fail("oc", "E and S are required");
    const double beta = get_number(oc, "beta", 1.0);
    if (!(beta > 0.0))
        parse_fail("oc.beta", "must be positive");
    return make_oc_system(J, M, parse_field_spec(oc["E"], "oc.E", dim),
                          parse_field_spec(oc["S"], "oc.S", dim), beta);
}

std::vector<std::string> default_checks(const std::string& process)
{
    if (process == "onsager-casimir")
        return {"energy-conservation", "entropy-monotone", "degeneracy",
                "geometric-hj", "lift-equivalence", "lift-tangency"};
    if (process == "ideal-to-interacting")
        return {"endpoint-oracle", "h-conservation", "interacting-defect",
                "interacting-gaslaw"};
    return {"endpoint-oracle", "h-conservation", "euler", "gas-law",
            "on-submanifold"};
}

const std::set<std::string>& known_checks()
{
    static const std::set<std::string> names = {
        "endpoint-oracle",  "h-conservation",  "euler",
        "gas-law",          "on-submanifold",  "interacting-defect",
        "interacting-gaslaw", "energy-conservation", "entropy-monotone",
        "degeneracy",       "geometric-hj",    "lift-equivalence",
        "lift-tangency"};
    return names;
}

const std::vector<double>* find_series(const std::vector<MonitorSeries>& monitors,
                                       const std::string& name)
{
    for (const MonitorSeries& m : monitors)
        if (m.name == name)
            return &m.values;
    return nullptr;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(std::string("document: ") + e.what());
    }
    if (!doc.is_object())
        parse_fail("document", "must be a JSON object");
    require_keys(doc, "",
                 {"name", "process", "representation", "params", "interaction",
                  "initial", "integrator", "tol", "checks", "output", "oc"});

    Scenario sc;
    if (!doc.contains("process") || !doc["process"].is_string())
        parse_fail("process", "required string field");
    sc.process = doc["process"].get<std::string>();
    const bool is_oc = sc.process == "onsager-casimir";
    if (!is_oc && !process_id_from_name(sc.process))
        parse_fail("process", "unknown process id '" + sc.process + "'");

    sc.name = doc.value("name", sc.process);

    if (doc.contains("params")) {
        require_keys(doc["params"], "params", {"A", "C"});
        sc.params.A = get_number(doc["params"], "A", 1.0);
        sc.params.C = get_number(doc["params"], "C", 1.5);
        if (!(sc.params.A > 0.0))
            parse_fail("params.A", "must be positive");
        if (!(sc.params.C > 0.0))
            parse_fail("params.C", "must be positive");
    }

    if (doc.contains("interaction")) {
        require_keys(doc["interaction"], "interaction", {"a"});
        sc.interaction.a = get_number(doc["interaction"], "a", 0.0);
        if (sc.interaction.a < 0.0)
            parse_fail("interaction.a", "must be nonnegative");
    }

    if (doc.contains("representation")) {
        if (is_oc)
            parse_fail("representation", "not applicable to onsager-casimir");
        const std::string rep = doc["representation"].get<std::string>();
        if (rep == "energy")
            sc.representation = GasChart::Energy;
        else if (rep == "entropy")
            sc.representation = GasChart::Entropy;
        else
            parse_fail("representation", "must be 'energy' or 'entropy'");
    } else if (sc.process == "isochoric-entropy") {
        sc.representation = GasChart::Entropy;
    }

    if (is_oc) {
        if (doc.contains("oc"))
            sc.oc = parse_oc_system(doc["oc"]);
    } else if (doc.contains("oc")) {
        parse_fail("oc", "only valid with process onsager-casimir");
    }

    // Initial data: (S,V,N) or (U,V,N) for gas runs, q for OC runs.
    if (is_oc) {
        if (doc.contains("initial")) {
            require_keys(doc["initial"], "initial", {"q"});
            const json& q = doc["initial"]["q"];
            if (!q.is_array() || q.empty())
                parse_fail("initial.q", "must be a non-empty array");
            for (const auto& v : q) {
                if (!v.is_number())
                    parse_fail("initial.q", "entries must be numbers");
                sc.q0.push_back(v.get<double>());
            }
        } else if (!sc.oc) {
            sc.q0 = {1.0, 0.0, 0.0};
        } else {
            parse_fail("initial.q", "required for a custom onsager-casimir system");
        }
        const int dim = sc.oc ? sc.oc->dim : 3;
        if (static_cast<int>(sc.q0.size()) != dim)
            parse_fail("initial.q", "length must equal the system dimension");
    } else {
        double S = 0.0, U = 0.0, V = 1.0, N = 1.0;
        bool has_s = false, has_u = false;
        if (doc.contains("initial")) {
            require_keys(doc["initial"], "initial", {"S", "U", "V", "N"});
            has_s = doc["initial"].contains("S");
            has_u = doc["initial"].contains("U");
            if (has_s && has_u)
                parse_fail("initial", "give either S or U, not both");
            S = get_number(doc["initial"], "S", 0.0);
            U = get_number(doc["initial"], "U", 0.0);
            V = get_number(doc["initial"], "V", 1.0);
            N = get_number(doc["initial"], "N", 1.0);
        }
        try {
            sc.initial = has_u ? entropy_fundamental(U, V, N, sc.params)
                               : energy_fundamental(S, V, N, sc.params);
        } catch (const std::domain_error& e) {
            parse_fail("initial", e.what());
        }
    }

    if (doc.contains("integrator")) {
        const json& integ = doc["integrator"];
        require_keys(integ, "integrator", {"method", "dt", "t_end", "rtol", "atol"});
        if (integ.contains("method")) {
            const std::string method = integ["method"].get<std::string>();
            if (method == "rk4-fixed")
                sc.integrator.method = StepMethod::Rk4Fixed;
            else if (method == "rk45-adaptive")
                sc.integrator.method = StepMethod::Rk45Adaptive;
            else
                parse_fail("integrator.method",
                           "must be 'rk4-fixed' or 'rk45-adaptive'");
        }
        sc.integrator.dt = get_number(integ, "dt", 1e-3);
        sc.integrator.t_end = get_number(integ, "t_end", 1.0);
        sc.integrator.rtol = get_number(integ, "rtol", 1e-9);
        sc.integrator.atol = get_number(integ, "atol", 1e-12);
        if (!(sc.integrator.dt > 0.0))
            parse_fail("integrator.dt", "must be positive");
        if (!std::isfinite(sc.integrator.t_end) || sc.integrator.t_end < 0.0)
            parse_fail("integrator.t_end", "must be finite and >= 0");
    }

    sc.tol = get_number(doc, "tol", 1e-6);
    if (!(sc.tol > 0.0))
        parse_fail("tol", "must be positive");

    if (doc.contains("checks")) {
        if (!doc["checks"].is_array())
            parse_fail("checks", "must be an array of check names");
        for (const auto& c : doc["checks"]) {
            const std::string name = c.get<std::string>();
            if (!known_checks().count(name))
                parse_fail("checks", "unknown check '" + name + "'");
            sc.checks.push_back(name);
        }
    } else {
        sc.checks = default_checks(sc.process);
    }
    if (!is_oc && sc.representation == GasChart::Entropy)
        for (const std::string& c : sc.checks)
            if (c == "interacting-defect")
                parse_fail("checks",
                           "interacting-defect requires the energy representation");

    if (doc.contains("output")) {
        require_keys(doc["output"], "output", {"dir", "long_format"});
        sc.output.dir = doc["output"].value("dir", std::string("."));
        if (doc["output"].contains("long_format")) {
            if (!doc["output"]["long_format"].is_boolean())
                parse_fail("output.long_format", "must be a boolean");
            sc.output.long_format = doc["output"]["long_format"].get<bool>();
        }
    }
    return sc;
}

Scenario parse_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioParseError("file: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Scenario default_scenario(const std::string& process_name)
{
    json doc = {{"process", process_name}};
    if (process_name == "ideal-to-interacting") {
        doc["interaction"] = {{"a", 0.1}};
        doc["integrator"] = {{"t_end", 2.0}};
    } else if (process_name == "onsager-casimir") {
        doc["integrator"] = {{"t_end", 2.0 * std::numbers::pi}};
    }
    return parse_scenario(doc.dump());
}

std::vector<std::pair<std::string, std::string>> catalog_listing()
{
    return {
        {"isochoric-energy",
         "isochoric ideal-gas flow, energy representation (h = TS + mu N - gamma U)"},
        {"isochoric-entropy",
         "isochoric ideal-gas flow, entropy representation (h = -S - beta mu N + gamma beta U)"},
        {"isochoric-isothermal",
         "isochoric-isothermal ideal-gas flow (h = TS - NT + mu N - U)"},
        {"ideal-to-interacting",
         "ideal gas deforming into a two-body interacting family (h = a/V)"},
        {"onsager-casimir",
         "GENERIC/Onsager-Casimir dissipative dynamics with contact lift"},
    };
}

namespace {

struct GasRunContext {
    AnalyticProcess process;
    GasChart chart = GasChart::Energy;
    ContactHamiltonian hamiltonian;
};

GasRunContext gas_context(const Scenario& sc)
{
    GasRunContext ctx;
    ctx.process = catalog_process(*process_id_from_name(sc.process), sc.params,
                                  sc.interaction);
    ctx.chart = sc.representation;
    if (ctx.chart == ctx.process.chart) {
        ctx.hamiltonian = ctx.process.hamiltonian;
    } else {
        // Promote the first coordinate to the potential role; for the gas
        // charts this is exactly the energy <-> entropy switch.
        ctx.hamiltonian =
            transform_hamiltonian_representation(ctx.process.hamiltonian, 1)
                .transformed;
    }
    return ctx;
}

double max_abs_diff_from_first(const std::vector<double>& series)
{
    double worst = 0.0;
    for (double v : series)
        worst = std::max(worst, std::abs(v - series.front()));
    return worst;
}

double series_max_abs(const std::vector<double>& series)
{
    double worst = 0.0;
    for (double v : series)
        worst = std::max(worst, std::abs(v));
    return worst;
}

CheckResult make_check(const std::string& name, double value, double tol,
                       std::string detail = "")
{
    CheckResult r;
    r.name = name;
    r.value = value;
    r.tolerance = tol;
    r.pass = value <= tol;
    r.detail = std::move(detail);
    return r;
}

void run_gas_checks(const Scenario& sc, const Trajectory& traj, RunReport& report)
{
    for (const std::string& name : sc.checks) {
        if (name == "endpoint-oracle") {
            double worst = 0.0;
            for (const auto& [comp, err] : report.endpoint_rel_errors)
                worst = std::max(worst, err);
            report.checks.push_back(make_check(name, worst, sc.tol,
                                               "max per-component relative error vs closed form"));
        } else if (name == "h-conservation") {
            report.checks.push_back(make_check(
                name, max_abs_diff_from_first(*find_series(traj.monitors, "h")),
                kHConservationTol));
        } else if (name == "euler") {
            report.checks.push_back(make_check(
                name, series_max_abs(*find_series(traj.monitors, "euler")),
                kResidualTol));
        } else if (name == "gas-law") {
            const double worst = std::max(
                series_max_abs(*find_series(traj.monitors, "gaslaw_pv")),
                series_max_abs(*find_series(traj.monitors, "gaslaw_eq")));
            report.checks.push_back(make_check(name, worst, kResidualTol));
        } else if (name == "on-submanifold") {
            report.checks.push_back(make_check(
                name, series_max_abs(*find_series(traj.monitors, "onL")),
                kResidualTol));
        } else if (name == "interacting-defect") {
            const std::vector<double>& onl = *find_series(traj.monitors, "onL");
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const double expected =
                    sc.interaction.a * traj.times[i] / traj.points[i].q[1];
                worst = std::max(worst, std::abs(onl[i] - expected));
            }
            report.checks.push_back(make_check(
                name, worst, kResidualTol,
                "on-submanifold defect follows a*t/V (expected off-submanifold drift)"));
        } else if (name == "interacting-gaslaw") {
            const std::vector<double>& pv = *find_series(traj.monitors, "gaslaw_pv");
            const double expected = -sc.interaction.a * traj.times.back() /
                                    traj.points.back().q[1];
            report.checks.push_back(make_check(
                name, std::abs(pv.back() - expected), kInteractingGasLawTol,
                "endpoint PV - NT matches -a*t/V (expected off-submanifold)"));
        } else {
            report.checks.push_back(make_check(
                name, 1.0, 0.0, "check not applicable to process " + sc.process));
        }
    }
}

void run_oc_checks(const Scenario& sc, const OCSystem& sys,
                   const BaseTrajectory& traj, RunReport& report)
{
    const ScalarField phi = oc_potential(sys);
    for (const std::string& name : sc.checks) {
        if (name == "energy-conservation") {
            report.checks.push_back(make_check(
                name, max_abs_diff_from_first(*find_series(traj.monitors, "E")),
                kEnergyConservationTol));
        } else if (name == "entropy-monotone") {
            const std::vector<double>& s = *find_series(traj.monitors, "S");
            double worst = 0.0;
            bool monotone = true;
            for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                const double ds = s[i + 1] - s[i];
                if (ds < -1e-12)
                    monotone = false;
                auto production = [&](const Vec& q) {
                    const Vec g = sys.entropy.grad(q);
                    const Eigen::VectorXd gv =
                        Eigen::Map<const Eigen::VectorXd>(g.data(),
                                                          static_cast<Eigen::Index>(g.size()));
                    return gv.dot(sys.M * gv);
                };
                const double rate = 0.5 * (production(traj.states[i]) +
                                           production(traj.states[i + 1]));
                const double dt = traj.times[i + 1] - traj.times[i];
                const double denom = std::max(std::abs(rate * dt), 1e-12);
                worst = std::max(worst, std::abs(ds - rate * dt) / denom);
            }
            CheckResult r = make_check(name, worst, kEntropyProductionTol,
                                       "per-step increase vs grad S . M grad S");
            r.pass = r.pass && monotone;
            if (!monotone)
                r.detail += " (monotonicity violated)";
            report.checks.push_back(r);
        } else if (name == "degeneracy") {
            double worst = 0.0;
            for (const Vec& q : traj.states) {
                const auto [jd, md] = degeneracy_residual(sys, q);
                worst = std::max({worst, jd, md});
            }
            report.checks.push_back(make_check(name, worst, kDegeneracyTol));
        } else if (name == "geometric-hj") {
            const Vec center(static_cast<std::size_t>(sys.dim), 0.0);
            report.checks.push_back(
                make_check(name, oc_geometric_hj_residual(sys, residual_grid(center, 1.0, 3)),
                           kGeometricHjTol));
        } else if (name == "lift-equivalence") {
            const ContactHamiltonian h = oc_contact_hamiltonian(sys);
            const SectionSigma sec = oc_section(sys);
            IntegratorConfig cfg = sc.integrator;
            cfg.domain_guard = nullptr;
            const BaseTrajectory projected = integrate_characteristics(
                [&](double, const Vec& q) { return projected_field(h, sec, q); },
                sc.q0, cfg);
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.states.size(); ++i)
                for (std::size_t j = 0; j < traj.states[i].size(); ++j)
                    worst = std::max(worst, std::abs(traj.states[i][j] -
                                                     projected.states[i][j]));
            report.checks.push_back(make_check(
                name, worst, kLiftEquivalenceTol,
                "projected contact flow vs direct base integration"));
        } else if (name == "lift-tangency") {
            const ContactHamiltonian h = oc_contact_hamiltonian(sys);
            const SectionSigma sec = oc_section(sys);
            IntegratorConfig cfg = sc.integrator;
            cfg.domain_guard = nullptr;
            const Trajectory lifted =
                integrate_contact_flow(h, section_lift(sec, sc.q0), cfg);
            double worst = 0.0;
            for (const PhasePoint& x : lifted.points) {
                const Vec g = phi.grad(x.q);
                for (std::size_t j = 0; j < g.size(); ++j)
                    worst = std::max(worst, std::abs(x.p[j] - g[j]));
            }
            report.checks.push_back(make_check(
                name, worst, kLiftTangencyTol,
                "momenta stay on the section p = grad Phi"));
        } else {
            report.checks.push_back(make_check(
                name, 1.0, 0.0, "check not applicable to process " + sc.process));
        }
    }
}

} // namespace

RunResult run_scenario(const Scenario& sc)
{
    RunResult res;
    res.report.scenario_name = sc.name;
    res.report.process = sc.process;
    res.report.dt = sc.integrator.dt;
    res.report.t_end = sc.integrator.t_end;
    res.report.is_gas = sc.is_gas();

    if (sc.is_gas()) {
        res.report.representation =
            sc.representation == GasChart::Energy ? "energy" : "entropy";
        const GasRunContext ctx = gas_context(sc);
        IntegratorConfig cfg = sc.integrator;
        const GasChart chart = ctx.chart;
        cfg.domain_guard = [chart](const PhasePoint& x) {
            if (!(x.q[1] > 0.0) || !(x.q[2] > 0.0))
                return false;
            return chart == GasChart::Energy || x.q[0] > 0.0;
        };
        const PhasePoint x0 = to_phase_point(sc.initial, ctx.chart);
        res.trajectory =
            integrate_contact_flow(ctx.hamiltonian, x0, cfg,
                                   make_gas_monitors(ctx.hamiltonian, sc.params, ctx.chart));
        res.report.monitors = monitor_report(res.trajectory);
        res.report.endpoint = to_gas_state(res.trajectory.points.back(), ctx.chart);
        res.report.oracle =
            analytic_oracle(ctx.process, sc.initial, sc.integrator.t_end);

        const GasState& num = *res.report.endpoint;
        const GasState& ora = *res.report.oracle;
        auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max(1.0, std::abs(b));
        };
        res.report.endpoint_rel_errors = {
            {"U", rel(num.U, ora.U)}, {"S", rel(num.S, ora.S)},
            {"V", rel(num.V, ora.V)}, {"N", rel(num.N, ora.N)},
            {"T", rel(num.T, ora.T)}, {"P", rel(num.P, ora.P)},
            {"mu", rel(num.mu, ora.mu)}};
        run_gas_checks(sc, res.trajectory, res.report);
    } else {
        const OCSystem sys = sc.oc ? *sc.oc : oc_reference_system();
        res.base = oc_integrate(sys, sc.q0, sc.integrator);
        res.report.monitors = monitor_report(res.base);
        res.report.endpoint_q = res.base.states.back();
        run_oc_checks(sc, sys, res.base, res.report);
    }

    res.report.pass = true;
    for (const CheckResult& c : res.report.checks)
        res.report.pass = res.report.pass && c.pass;
    return res;
}

std::string trajectory_csv(const RunResult& res)
{
    std::ostringstream out;
    if (res.report.is_gas) {
        out << "t,s,q1,q2,q3,p1,p2,p3,h,euler,gaslaw_pv,gaslaw_eq,onL\n";
        const Trajectory& traj = res.trajectory;
        const char* monitor_order[] = {"h", "euler", "gaslaw_pv", "gaslaw_eq", "onL"};
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const PhasePoint& x = traj.points[i];
            out << format_double(traj.times[i]) << ',' << format_double(x.s);
            for (double v : x.q)
                out << ',' << format_double(v);
            for (double v : x.p)
                out << ',' << format_double(v);
            for (const char* m : monitor_order)
                out << ',' << format_double((*find_series(traj.monitors, m))[i]);
            out << '\n';
        }
    } else {
        const BaseTrajectory& traj = res.base;
        out << 't';
        for (std::size_t j = 0; j < traj.states.front().size(); ++j)
            out << ",q" << (j + 1);
        for (const MonitorSeries& m : traj.monitors)
            out << ',' << m.name;
        out << '\n';
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            out << format_double(traj.times[i]);
            for (double v : traj.states[i])
                out << ',' << format_double(v);
            for (const MonitorSeries& m : traj.monitors)
                out << ',' << format_double(m.values[i]);
            out << '\n';
        }
    }
    return out.str();
}

std::string long_format_csv(const RunResult& res)
{
    std::ostringstream out;
    out << "t,series,value\n";
    auto emit = [&](double t, const std::string& series, double v) {
        out << format_double(t) << ',' << series << ',' << format_double(v) << '\n';
    };
    if (res.report.is_gas) {
        const Trajectory& traj = res.trajectory;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double t = traj.times[i];
            const PhasePoint& x = traj.points[i];
            emit(t, "s", x.s);
            for (std::size_t j = 0; j < x.q.size(); ++j)
                emit(t, "q" + std::to_string(j + 1), x.q[j]);
            for (std::size_t j = 0; j < x.p.size(); ++j)
                emit(t, "p" + std::to_string(j + 1), x.p[j]);
            for (const MonitorSeries& m : traj.monitors)
                emit(t, m.name, m.values[i]);
        }
    } else {
        const BaseTrajectory& traj = res.base;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double t = traj.times[i];
            for (std::size_t j = 0; j < traj.states[i].size(); ++j)
                emit(t, "q" + std::to_string(j + 1), traj.states[i][j]);
            for (const MonitorSeries& m : traj.monitors)
                emit(t, m.name, m.values[i]);
        }
    }
    return out.str();
}

namespace {

json gas_state_json(const GasState& st)
{
    return {{"U", st.U}, {"S", st.S}, {"V", st.V}, {"N", st.N},
            {"T", st.T}, {"P", st.P}, {"mu", st.mu}};
}

} // namespace

std::string report_json(const RunReport& report)
{
    json doc;
    doc["scenario"] = report.scenario_name;
    doc["process"] = report.process;
    if (!report.representation.empty())
        doc["representation"] = report.representation;
    doc["dt"] = report.dt;
    doc["t_end"] = report.t_end;
    doc["pass"] = report.pass;
    if (report.endpoint)
        doc["endpoint"] = gas_state_json(*report.endpoint);
    else
        doc["endpoint"] = {{"q", report.endpoint_q}};
    if (report.oracle) {
        doc["oracle"] = gas_state_json(*report.oracle);
        json errs;
        for (const auto& [comp, err] : report.endpoint_rel_errors)
            errs[comp] = err;
        doc["endpoint_rel_errors"] = errs;
    } else {
        doc["oracle"] = nullptr;
    }
    json monitors;
    for (const MonitorStats& m : report.monitors)
        monitors[m.name] = {{"max_abs", m.max_abs}, {"final", m.final},
                            {"drift", m.drift}};
    doc["monitors"] = monitors;
    json checks = json::array();
    for (const CheckResult& c : report.checks) {
        json entry = {{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                      {"tolerance", c.tolerance}};
        if (!c.detail.empty())
            entry["detail"] = c.detail;
        checks.push_back(entry);
    }
    doc["checks"] = checks;
    return doc.dump(2) + "\n";
}

void emit_outputs(const RunResult& res, const Scenario& sc)
{
    namespace fs = std::filesystem;
    const fs::path dir(sc.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("emit_outputs: cannot create directory '" +
                                 dir.string() + "': " + ec.message());

    auto write_file = [&](const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        out << content;
        if (!out)
            throw std::runtime_error("emit_outputs: cannot write '" + path.string() + "'");
    };
    write_file(dir / (sc.name + "_trajectory.csv"), trajectory_csv(res));
    write_file(dir / (sc.name + "_report.json"), report_json(res.report));
    if (sc.output.long_format)
        write_file(dir / (sc.name + "_trajectory_long.csv"), long_format_csv(res));
}

} // namespace contactflow
