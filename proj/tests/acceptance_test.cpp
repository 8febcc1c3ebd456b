// Acceptance suite: end-to-end checks of the numerical engine against the
// closed-form ideal-gas and Onsager-Casimir solutions. Prints one line per
// criterion; the exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "contactflow/dynamics.hpp"
#include "contactflow/generic_oc.hpp"
#include "contactflow/scenario.hpp"
#include "contactflow/submanifold.hpp"
#include "contactflow/thermo.hpp"

using namespace contactflow;

namespace {

struct Checker {
    bool ok = true;
    std::string first_failure;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }

    void within(double value, double expected, double tol, const std::string& what)
    {
        const double err = std::abs(value - expected);
        require(err <= tol, what + " (|" + std::to_string(value) + " - " +
                                std::to_string(expected) + "| = " +
                                std::to_string(err) + " > " + std::to_string(tol) + ")");
    }
};

double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

const IdealGasParams kParams{};
const double kGamma = kParams.gamma();

GasState reference_state()
{
    return energy_fundamental(0.0, 1.0, 1.0, kParams);
}

Trajectory isochoric_reference_run()
{
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const ContactHamiltonian h = isochoric_energy_hamiltonian(kParams);
    return integrate_contact_flow(h, to_phase_point(reference_state(), GasChart::Energy),
                                  cfg, make_gas_monitors(h, kParams, GasChart::Energy));
}

void criterion_1(Checker& c)
{
    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = isochoric_reference_run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const GasState end = to_gas_state(traj.points.back(), GasChart::Energy);
    c.require(rel_err(end.U, std::exp(5.0 / 3.0)) <= 1e-6, "U endpoint");
    c.require(rel_err(end.T, (2.0 / 3.0) * std::exp(2.0 / 3.0)) <= 1e-6, "T endpoint");
    c.require(rel_err(end.P, (2.0 / 3.0) * std::exp(5.0 / 3.0)) <= 1e-6, "P endpoint");
    c.require(rel_err(end.N, std::exp(1.0)) <= 1e-6, "N endpoint");
    c.require(rel_err(end.S, 0.0) <= 1e-6, "S endpoint");
    c.require(rel_err(end.V, 1.0) <= 1e-6, "V endpoint");
    c.require(seconds < 1.0, "runtime below one second");
}

void criterion_2(Checker& c)
{
    const Trajectory traj = isochoric_reference_run();
    for (const MonitorStats& m : monitor_report(traj)) {
        if (m.name == "h")
            c.require(m.max_abs <= 1e-8, "max |h| along the trajectory");
        else
            c.require(m.max_abs <= 1e-6, "max |" + m.name + "| along the trajectory");
    }
}

void criterion_3(Checker& c)
{
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;

    const Trajectory energy_run = integrate_contact_flow(
        isochoric_energy_hamiltonian(kParams),
        to_phase_point(reference_state(), GasChart::Energy), cfg);
    const Trajectory entropy_run = integrate_contact_flow(
        isochoric_entropy_hamiltonian(kParams),
        to_phase_point(reference_state(), GasChart::Entropy), cfg);

    const double beta_end = entropy_run.points.back().p[0];
    c.within(beta_end, 1.5 * std::exp(1.0 - kGamma), 1e-6, "beta(1)");

    c.require(energy_run.times.size() == entropy_run.times.size(), "matching grids");
    double worst = 0.0;
    for (std::size_t i = 0; i < entropy_run.times.size(); ++i) {
        const Vec& q = entropy_run.points[i].q; // (U, V, N)
        const GasState mapped = entropy_fundamental(q[0], q[1], q[2], kParams);
        worst = std::max(worst, std::abs(mapped.S - energy_run.points[i].q[0]));
        worst = std::max(worst, std::abs(q[1] - energy_run.points[i].q[1]));
        worst = std::max(worst, std::abs(q[2] - energy_run.points[i].q[2]));
    }
    c.require(worst <= 1e-6, "pointwise trajectory map through the fundamental relation");
}

void criterion_4(Checker& c)
{
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const GasState r0 = reference_state();
    const Trajectory traj = integrate_contact_flow(
        isothermal_hamiltonian(), to_phase_point(r0, GasChart::Energy), cfg);

    for (const PhasePoint& x : traj.points)
        c.require(std::abs(x.p[0] - 2.0 / 3.0) <= 1e-8, "T constant along the flow");

    const GasState end = to_gas_state(traj.points.back(), GasChart::Energy);
    c.require(rel_err(end.P / r0.P, std::exp(1.0)) <= 1e-6, "P(1)/P0 = e");
    c.require(rel_err(end.U / r0.U, std::exp(1.0)) <= 1e-6, "U(1)/U0 = e");
    c.within(end.S, -std::exp(1.0), 1e-6, "S(1)");
    c.within(end.mu, 7.0 / 3.0, 1e-6, "mu(1)");
}

void criterion_5(Checker& c)
{
    const ContactHamiltonian h = isothermal_hamiltonian();

    PrincipalFunction time_independent;
    time_independent.value = [](const Vec& q, double) {
        return energy_fundamental(q[0], q[1], q[2], kParams).U;
    };
    std::vector<std::pair<Vec, double>> grid;
    for (const Vec& q : residual_grid({0.0, 1.0, 1.0}))
        grid.emplace_back(q, 0.0);
    c.require(hj_residual(time_independent, h, grid) <= 1e-6,
              "time-independent solution satisfies the equation");

    // The exponentially factored candidate misses by exactly W/C pointwise.
    PrincipalFunction factored;
    factored.value = [](const Vec& q, double t) {
        return energy_fundamental(q[0], q[1], q[2], kParams).U *
               std::exp(-t / kParams.C);
    };
    for (const Vec& q : residual_grid({0.0, 1.0, 1.0})) {
        for (double t : {0.0, 0.5, 1.0}) {
            const double res = std::abs(hj_residual_at(factored, h, q, t));
            const double w_over_c = factored.value(q, t) / kParams.C;
            c.require(std::abs(res - w_over_c) <= 1e-6,
                      "factored candidate misses by W/C at each grid point");
        }
    }
}

void criterion_6(Checker& c)
{
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    const GasState r0 = reference_state();
    const ContactHamiltonian h = interacting_hamiltonian(0.1);
    const Trajectory traj =
        integrate_contact_flow(h, to_phase_point(r0, GasChart::Energy), cfg,
                               make_gas_monitors(h, kParams, GasChart::Energy));

    const GasState end = to_gas_state(traj.points.back(), GasChart::Energy);
    c.within(end.U, 0.8, 1e-8, "U endpoint");
    c.within(end.P, 2.0 / 3.0 - 0.2, 1e-8, "P endpoint");
    c.within(end.S, r0.S, 1e-10, "S frozen");
    c.within(end.V, r0.V, 1e-10, "V frozen");
    c.within(end.N, r0.N, 1e-10, "N frozen");
    c.within(end.T, r0.T, 1e-10, "T frozen");
    c.within(end.mu, r0.mu, 1e-10, "mu frozen");

    const auto [pv, eq] = gas_law_residuals(end, kParams);
    c.within(pv, -0.2, 1e-8, "gas-law defect PV - NT");

    const GasState closed = interacting_state(r0, {0.1, 2.0});
    c.within(end.U, closed.U, 1e-12, "matches interacting_state (U)");
    c.within(end.P, closed.P, 1e-12, "matches interacting_state (P)");
}

void criterion_7(Checker& c)
{
    const LegendreGenerator gas = ideal_gas_generator(kParams);
    SectionSigma sigma{gas.value, gas.grad};
    const double res = geometric_hj_residual(isochoric_energy_hamiltonian(kParams),
                                             sigma, residual_grid({0.0, 1.0, 1.0}));
    c.require(res <= 1e-8, "h on the lifted section vanishes near the reference state");
}

void criterion_8(Checker& c)
{
    const OCSystem sys = oc_reference_system();
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0 * std::numbers::pi;

    const BaseTrajectory traj = oc_integrate(sys, {1.0, 0.0, 0.0}, cfg);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        c.require(std::abs(traj.monitors[0].values[i] - 0.5) <= 1e-8, "E conserved");
        c.require(std::abs(traj.monitors[1].values[i] - 0.5 * traj.times[i]) <= 1e-6,
                  "S(t) = t/2");
    }
    const Vec& end = traj.states.back();
    c.within(end[0], 1.0, 1e-6, "q1 endpoint");
    c.within(end[1], 0.0, 1e-6, "q2 endpoint");
    c.within(end[2], std::numbers::pi, 1e-6, "q3 endpoint");

    const ContactHamiltonian h = oc_contact_hamiltonian(sys);
    const SectionSigma sec = oc_section(sys);
    const BaseTrajectory projected = integrate_characteristics(
        [&](double, const Vec& q) { return projected_field(h, sec, q); },
        {1.0, 0.0, 0.0}, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst,
                             std::abs(traj.states[i][j] - projected.states[i][j]));
    c.require(worst <= 1e-7, "projected contact flow vs direct integration");

    double degeneracy_worst = 0.0;
    for (const Vec& q : traj.states) {
        const auto [jd, md] = degeneracy_residual(sys, q);
        degeneracy_worst = std::max({degeneracy_worst, jd, md});
    }
    c.require(degeneracy_worst <= 1e-12, "degeneracy residuals");

    c.require(oc_geometric_hj_residual(sys, residual_grid({0.0, 0.0, 0.0}, 1.0, 3)) <=
                  1e-10,
              "geometric Hamilton-Jacobi residual of the potential section");
}

void criterion_9(Checker& c)
{
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> s_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);

    // Homogeneity of the fundamental relation.
    for (double lambda : {0.5, 2.0, 3.0}) {
        for (int i = 0; i < 30; ++i) {
            const double S = s_dist(rng), V = pos(rng), N = pos(rng);
            const double u1 = energy_fundamental(S, V, N, kParams).U;
            const double u2 =
                energy_fundamental(lambda * S, lambda * V, lambda * N, kParams).U;
            c.require(std::abs(u2 - lambda * u1) / std::abs(lambda * u1) <= 1e-12,
                      "homogeneity");
        }
    }

    // Energy <-> entropy round trip.
    for (int i = 0; i < 100; ++i) {
        const GasState a = energy_fundamental(s_dist(rng), pos(rng), pos(rng), kParams);
        const GasState b = entropy_fundamental(a.U, a.V, a.N, kParams);
        c.require(std::abs(b.S - a.S) <= 1e-10, "round trip S");
        c.require(std::abs(b.mu - a.mu) <= 1e-10, "round trip mu");
    }

    // eta(X_h) = -h across the catalog.
    std::vector<ContactHamiltonian> catalog = {
        isochoric_energy_hamiltonian(kParams), isochoric_entropy_hamiltonian(kParams),
        isothermal_hamiltonian(), interacting_hamiltonian(0.1),
        interacting_entropy_hamiltonian(0.1),
        oc_contact_hamiltonian(oc_reference_system())};
    std::uniform_real_distribution<double> sym(-2.0, 2.0);
    for (const ContactHamiltonian& h : catalog) {
        for (int i = 0; i < 100; ++i) {
            PhasePoint x;
            x.s = sym(rng);
            x.q = {sym(rng), pos(rng), pos(rng)};
            x.p = {sym(rng), sym(rng), sym(rng)};
            const TangentVector v = contact_vector_field(h, x);
            c.require(std::abs(contact_form_apply(x, v) + h.value(x)) <= 1e-10,
                      "eta(X_h) + h for " + h.name);
        }
    }

    // Fourth-order convergence under step halving.
    const AnalyticProcess proc = catalog_process(ProcessId::IsochoricEnergy, kParams);
    const GasState exact = analytic_oracle(proc, reference_state(), 1.0);
    auto endpoint_error = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 1.0;
        const Trajectory traj = integrate_contact_flow(
            proc.hamiltonian, to_phase_point(reference_state(), GasChart::Energy), cfg);
        return std::abs(to_gas_state(traj.points.back(), GasChart::Energy).U - exact.U);
    };
    const double ratio = endpoint_error(0.05) / endpoint_error(0.025);
    c.require(ratio >= 16.0 * 0.8 && ratio <= 16.0 * 1.2,
              "RK4 convergence factor " + std::to_string(ratio));

    // Legendre regularity at the reference state and rejection of a
    // constructed singular block.
    auto temperature = [&](const Vec& x) {
        return energy_fundamental(x[0], 1.0, 1.0, kParams).T;
    };
    Eigen::MatrixXd block(1, 1);
    block(0, 0) = fd_partial(temperature, {0.0}, 0, 1e-5);
    const RegularityResult reg = legendre_regularity(block);
    c.within(reg.det, 4.0 / 9.0, 1e-9, "Hessian block determinant at the reference state");
    c.require(reg.regular, "reference block is regular");
    Eigen::MatrixXd singular = Eigen::MatrixXd::Identity(2, 2);
    singular(1, 1) = 1e-14;
    c.require(!legendre_regularity(singular).regular, "singular block is rejected");
}

} // namespace

int main()
{
    struct Entry {
        int id;
        const char* label;
        std::function<void(Checker&)> body;
    };
    const std::vector<Entry> criteria = {
        {1, "isochoric flow reproduces the exponential endpoints", criterion_1},
        {2, "h and residual monitors stay flat along the isochoric flow", criterion_2},
        {3, "entropy representation is flow-equivalent (beta and mapped trajectory)",
         criterion_3},
        {4, "isochoric-isothermal flow endpoints", criterion_4},
        {5, "Hamilton-Jacobi residuals separate the two candidate solutions",
         criterion_5},
        {6, "ideal-to-interacting endpoint and gas-law defect", criterion_6},
        {7, "geometric Hamilton-Jacobi residual of the energy section", criterion_7},
        {8, "Onsager-Casimir reference dynamics", criterion_8},
        {9, "property suites (homogeneity, round trip, identity, order, regularity)",
         criterion_9},
    };

    int failures = 0;
    for (const Entry& entry : criteria) {
        Checker c;
        try {
            entry.body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        if (c.ok) {
            std::printf("[PASS] criterion %d: %s\n", entry.id, entry.label);
        } else {
            std::printf("[FAIL] criterion %d: %s -- %s\n", entry.id, entry.label,
                        c.first_failure.c_str());
            ++failures;
        }
    }
    return failures;
}
