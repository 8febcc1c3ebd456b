#include "contactflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "contactflow/submanifold.hpp"

namespace contactflow {

namespace {

using DerivFn = std::function<Vec(double, const Vec&)>;

bool all_finite(const Vec& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

Vec axpy(const Vec& y, double a, const Vec& k)
{
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + a * k[i];
    return out;
}

Vec rk4_step(const DerivFn& f, double t, const Vec& y, double h)
{
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Vec k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const Vec k4 = f(t + h, axpy(y, h, k3));
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    return out;
}

// Cash-Karp embedded 4(5) pair.
struct CkStep {
    Vec y5;          // fifth-order solution
    double err_norm; // scaled max-norm of the embedded error estimate
};

CkStep ck45_step(const DerivFn& f, double t, const Vec& y, double h,
                 double rtol, double atol)
{
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 3.0 / 10.0, a42 = -9.0 / 10.0, a43 = 6.0 / 5.0;
    static constexpr double a51 = -11.0 / 54.0, a52 = 5.0 / 2.0,
                            a53 = -70.0 / 27.0, a54 = 35.0 / 27.0;
    static constexpr double a61 = 1631.0 / 55296.0, a62 = 175.0 / 512.0,
                            a63 = 575.0 / 13824.0, a64 = 44275.0 / 110592.0,
                            a65 = 253.0 / 4096.0;
    static constexpr double b1 = 37.0 / 378.0, b3 = 250.0 / 621.0,
                            b4 = 125.0 / 594.0, b6 = 512.0 / 1771.0;
    static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                            d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0,
                            d6 = 1.0 / 4.0;

    const std::size_t n = y.size();
    const Vec k1 = f(t, y);
    Vec tmp(n);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * a21 * k1[i];
    const Vec k2 = f(t + h / 5.0, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec k3 = f(t + 3.0 * h / 10.0, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec k4 = f(t + 3.0 * h / 5.0, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Vec k5 = f(t + h, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    const Vec k6 = f(t + 7.0 * h / 8.0, tmp);

    CkStep out;
    out.y5.resize(n);
    out.err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y5 = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b6 * k6[i]);
        const double y4 = y[i] + h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                      d5 * k5[i] + d6 * k6[i]);
        out.y5[i] = y5;
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5));
        out.err_norm = std::max(out.err_norm, std::abs(y5 - y4) / scale);
    }
    return out;
}

struct Sample {
    double t;
    Vec y;
};

// Shared driver for both integration modes; invokes `record` at t=0 and at
// every accepted step, `fail` to build the module-specific error type.
template <typename RecordFn, typename FailFn>
void drive(const DerivFn& f, const Vec& y0, const IntegratorConfig& cfg,
           const RecordFn& record, const FailFn& fail)
{
    if (!(cfg.dt > 0.0))
        throw std::invalid_argument("IntegratorConfig: dt must be positive");
    if (!std::isfinite(cfg.t_end) || cfg.t_end < 0.0)
        throw std::invalid_argument("IntegratorConfig: t_end must be finite and >= 0");

    const double tiny = 1e-12 * std::max(1.0, cfg.t_end);
    record(0.0, y0);

    double t = 0.0;
    Vec y = y0;
    if (cfg.method == StepMethod::Rk4Fixed) {
        for (long i = 1; t < cfg.t_end - tiny; ++i) {
            double t_next = static_cast<double>(i) * cfg.dt;
            if (t_next > cfg.t_end - tiny)
                t_next = cfg.t_end;
            y = rk4_step(f, t, y, t_next - t);
            t = t_next;
            if (!all_finite(y))
                fail(t, "non-finite state during integration");
            record(t, y);
        }
        return;
    }

    double h = std::min(cfg.dt, cfg.t_end);
    long rejections = 0;
    while (t < cfg.t_end - tiny) {
        h = std::min(h, cfg.t_end - t);
        const CkStep step = ck45_step(f, t, y, h, cfg.rtol, cfg.atol);
        if (step.err_norm <= 1.0 || h <= tiny) {
            t += h;
            y = step.y5;
            if (!all_finite(y))
                fail(t, "non-finite state during integration");
            record(t, y);
        } else if (++rejections > 1000000) {
            fail(t, "adaptive step control failed to converge");
        }
        const double factor = step.err_norm > 0.0
                                  ? 0.9 * std::pow(step.err_norm, -0.2)
                                  : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < 1e-14 * std::max(1.0, cfg.t_end))
            fail(t, "adaptive step size underflow");
    }
}

Vec flatten(const PhasePoint& x)
{
    Vec y;
    y.reserve(1 + 2 * x.q.size());
    y.push_back(x.s);
    y.insert(y.end(), x.q.begin(), x.q.end());
    y.insert(y.end(), x.p.begin(), x.p.end());
    return y;
}

PhasePoint unflatten(const Vec& y, int n)
{
    PhasePoint x;
    x.s = y[0];
    x.q.assign(y.begin() + 1, y.begin() + 1 + n);
    x.p.assign(y.begin() + 1 + n, y.end());
    return x;
}

} // namespace

Vec PrincipalFunction::gradient_q(const Vec& q, double t) const
{
    if (grad_q)
        return grad_q(q, t);
    return fd_gradient([this, t](const Vec& qq) { return value(qq, t); }, q,
                       fd_rel_step);
}

double PrincipalFunction::time_partial(const Vec& q, double t) const
{
    if (dW_dt)
        return dW_dt(q, t);
    const double h = fd_step(t, fd_rel_step);
    return (value(q, t + h) - value(q, t - h)) / (2.0 * h);
}

Trajectory integrate_contact_flow(const ContactHamiltonian& h, const PhasePoint& x0,
                                  const IntegratorConfig& cfg,
                                  const std::vector<Monitor>& monitors)
{
    const int n = x0.n();
    Trajectory traj;
    traj.monitors.reserve(monitors.size());
    for (const Monitor& m : monitors)
        traj.monitors.push_back({m.name, {}});

    auto record = [&](double t, const Vec& y) {
        const PhasePoint x = unflatten(y, n);
        if (cfg.domain_guard && !cfg.domain_guard(x))
            throw DomainExitError("trajectory left the admissible domain at t = " +
                                      std::to_string(t),
                                  traj, t);
        traj.times.push_back(t);
        traj.points.push_back(x);
        for (std::size_t m = 0; m < monitors.size(); ++m)
            traj.monitors[m].values.push_back(monitors[m].eval(t, x));
    };
    auto fail = [&](double t, const std::string& why) {
        throw FlowError(why + " (t = " + std::to_string(t) + ")", traj, t);
    };
    DerivFn deriv = [&](double, const Vec& y) {
        const TangentVector v = contact_vector_field(h, unflatten(y, n));
        Vec dy;
        dy.reserve(y.size());
        dy.push_back(v.ds);
        dy.insert(dy.end(), v.dq.begin(), v.dq.end());
        dy.insert(dy.end(), v.dp.begin(), v.dp.end());
        return dy;
    };

    try {
        drive(deriv, flatten(x0), cfg, record, fail);
    } catch (const FlowError&) {
        throw;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw FlowError(std::string("evaluation failure: ") + e.what(), traj,
                        traj.times.empty() ? 0.0 : traj.times.back());
    }
    return traj;
}

BaseTrajectory integrate_characteristics(const BaseField& field, const Vec& q0,
                                         const IntegratorConfig& cfg,
                                         const std::vector<BaseMonitor>& monitors)
{
    BaseTrajectory traj;
    traj.monitors.reserve(monitors.size());
    for (const BaseMonitor& m : monitors)
        traj.monitors.push_back({m.name, {}});

    auto record = [&](double t, const Vec& y) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        for (std::size_t m = 0; m < monitors.size(); ++m)
            traj.monitors[m].values.push_back(monitors[m].eval(t, y));
    };
    auto fail = [&](double t, const std::string& why) {
        throw BaseFlowError(why + " (t = " + std::to_string(t) + ")", traj, t);
    };

    try {
        drive(field, q0, cfg, record, fail);
    } catch (const BaseFlowError&) {
        throw;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw BaseFlowError(std::string("evaluation failure: ") + e.what(), traj,
                            traj.times.empty() ? 0.0 : traj.times.back());
    }
    return traj;
}

double hj_residual_at(const PrincipalFunction& W, const ContactHamiltonian& h,
                      const Vec& q, double t)
{
    PhasePoint x;
    x.q = q;
    x.s = W.value(q, t);
    x.p = W.gradient_q(q, t);
    return W.time_partial(q, t) + h.value(x);
}

double hj_residual(const PrincipalFunction& W, const ContactHamiltonian& h,
                   const std::vector<std::pair<Vec, double>>& grid)
{
    double worst = 0.0;
    for (const auto& [q, t] : grid)
        worst = std::max(worst, std::abs(hj_residual_at(W, h, q, t)));
    return worst;
}

ContactHamiltonian isochoric_energy_hamiltonian(const IdealGasParams& params)
{
    const double gamma = params.gamma();
    ContactHamiltonian h;
    h.name = "isochoric-energy";
    h.value = [gamma](const PhasePoint& x) {
        return x.p[0] * x.q[0] + x.p[2] * x.q[2] - gamma * x.s;
    };
    h.grad = [gamma](const PhasePoint& x) {
        HamiltonianGradient g;
        g.dh_ds = -gamma;
        g.dh_dq = {x.p[0], 0.0, x.p[2]};
        g.dh_dp = {x.q[0], 0.0, x.q[2]};
        return g;
    };
    return h;
}

ContactHamiltonian isochoric_entropy_hamiltonian(const IdealGasParams& params)
{
    const double gamma = params.gamma();
    ContactHamiltonian h;
    h.name = "isochoric-entropy";
    h.value = [gamma](const PhasePoint& x) {
        return -x.s + gamma * x.p[0] * x.q[0] + x.p[2] * x.q[2];
    };
    h.grad = [gamma](const PhasePoint& x) {
        HamiltonianGradient g;
        g.dh_ds = -1.0;
        g.dh_dq = {gamma * x.p[0], 0.0, x.p[2]};
        g.dh_dp = {gamma * x.q[0], 0.0, x.q[2]};
        return g;
    };
    return h;
}

ContactHamiltonian isothermal_hamiltonian()
{
    ContactHamiltonian h;
    h.name = "isochoric-isothermal";
    h.value = [](const PhasePoint& x) {
        return x.p[0] * (x.q[0] - x.q[2]) + x.p[2] * x.q[2] - x.s;
    };
    h.grad = [](const PhasePoint& x) {
        HamiltonianGradient g;
        g.dh_ds = -1.0;
        g.dh_dq = {x.p[0], 0.0, x.p[2] - x.p[0]};
        g.dh_dp = {x.q[0] - x.q[2], 0.0, x.q[2]};
        return g;
    };
    return h;
}

ContactHamiltonian interacting_hamiltonian(double a)
{
    ContactHamiltonian h;
    h.name = "ideal-to-interacting";
    h.value = [a](const PhasePoint& x) { return a / x.q[1]; };
    h.grad = [a](const PhasePoint& x) {
        HamiltonianGradient g;
        g.dh_dq = {0.0, -a / (x.q[1] * x.q[1]), 0.0};
        g.dh_dp = {0.0, 0.0, 0.0};
        return g;
    };
    return h;
}

ContactHamiltonian interacting_entropy_hamiltonian(double a)
{
    ContactHamiltonian h;
    h.name = "ideal-to-interacting-entropy";
    h.value = [a](const PhasePoint& x) { return -x.p[0] * a / x.q[1]; };
    h.grad = [a](const PhasePoint& x) {
        HamiltonianGradient g;
        g.dh_dq = {0.0, x.p[0] * a / (x.q[1] * x.q[1]), 0.0};
        g.dh_dp = {-a / x.q[1], 0.0, 0.0};
        return g;
    };
    return h;
}

GasState AnalyticProcess::closed_form(const GasState& x0, double t) const
{
    const double gamma = params.gamma();
    GasState st = x0;
    switch (id) {
    case ProcessId::IsochoricEnergy:
    case ProcessId::IsochoricEntropy:
        st.S = x0.S * std::exp(t);
        st.N = x0.N * std::exp(t);
        st.U = x0.U * std::exp(gamma * t);
        st.T = x0.T * std::exp((gamma - 1.0) * t);
        st.P = x0.P * std::exp(gamma * t);
        st.mu = x0.mu * std::exp((gamma - 1.0) * t);
        break;
    case ProcessId::IsochoricIsothermal:
        st.N = x0.N * std::exp(t);
        st.S = (x0.S - x0.N * t) * std::exp(t);
        st.U = x0.U * std::exp(t);
        st.P = x0.P * std::exp(t);
        st.mu = x0.mu + x0.T * t;
        break;
    case ProcessId::IdealToInteracting:
        st = interacting_state(x0, {interaction.a, t});
        break;
    }
    return st;
}

AnalyticProcess catalog_process(ProcessId id, const IdealGasParams& params,
                                const InteractionParams& ip)
{
    if (ip.a < 0.0)
        throw std::invalid_argument("catalog_process: interaction strength a must be >= 0");
    AnalyticProcess proc;
    proc.id = id;
    proc.params = params;
    proc.interaction = ip;
    switch (id) {
    case ProcessId::IsochoricEnergy:
        proc.name = "isochoric-energy";
        proc.chart = GasChart::Energy;
        proc.hamiltonian = isochoric_energy_hamiltonian(params);
        break;
    case ProcessId::IsochoricEntropy:
        proc.name = "isochoric-entropy";
        proc.chart = GasChart::Entropy;
        proc.hamiltonian = isochoric_entropy_hamiltonian(params);
        break;
    case ProcessId::IsochoricIsothermal:
        proc.name = "isochoric-isothermal";
        proc.chart = GasChart::Energy;
        proc.hamiltonian = isothermal_hamiltonian();
        break;
    case ProcessId::IdealToInteracting:
        proc.name = "ideal-to-interacting";
        proc.chart = GasChart::Energy;
        proc.hamiltonian = interacting_hamiltonian(ip.a);
        break;
    }
    return proc;
}

const std::vector<std::string>& catalog_process_names()
{
    static const std::vector<std::string> names = {
        "isochoric-energy",
        "isochoric-entropy",
        "isochoric-isothermal",
        "ideal-to-interacting",
    };
    return names;
}

std::optional<ProcessId> process_id_from_name(const std::string& name)
{
    if (name == "isochoric-energy")
        return ProcessId::IsochoricEnergy;
    if (name == "isochoric-entropy")
        return ProcessId::IsochoricEntropy;
    if (name == "isochoric-isothermal")
        return ProcessId::IsochoricIsothermal;
    if (name == "ideal-to-interacting")
        return ProcessId::IdealToInteracting;
    return std::nullopt;
}

GasState analytic_oracle(const AnalyticProcess& proc, const GasState& x0, double t)
{
    const GasState ref = energy_fundamental(x0.S, x0.V, x0.N, proc.params);
    const double defect = std::max(
        {std::abs(x0.U - ref.U) / std::max(1.0, std::abs(ref.U)),
         std::abs(x0.T - ref.T) / std::max(1.0, std::abs(ref.T)),
         std::abs(x0.P - ref.P) / std::max(1.0, std::abs(ref.P)),
         std::abs(x0.mu - ref.mu) / std::max(1.0, std::abs(ref.mu))});
    if (defect > 1e-8)
        throw std::invalid_argument(
            "analytic_oracle: initial state is off the ideal-gas submanifold (defect " +
            std::to_string(defect) + ")");
    return proc.closed_form(x0, t);
}

std::vector<Monitor> make_gas_monitors(const ContactHamiltonian& h,
                                       const IdealGasParams& params, GasChart chart)
{
    const LegendreGenerator gen = ideal_gas_generator(params, chart);
    std::vector<Monitor> ms;
    ms.push_back({"h", [h](double, const PhasePoint& x) { return h.value(x); }});
    ms.push_back({"euler", [chart](double, const PhasePoint& x) {
                      return euler_residual(to_gas_state(x, chart));
                  }});
    ms.push_back({"gaslaw_pv", [chart, params](double, const PhasePoint& x) {
                      return gas_law_residuals(to_gas_state(x, chart), params).first;
                  }});
    ms.push_back({"gaslaw_eq", [chart, params](double, const PhasePoint& x) {
                      return gas_law_residuals(to_gas_state(x, chart), params).second;
                  }});
    ms.push_back({"onL", [gen](double, const PhasePoint& x) {
                      return on_submanifold_residual(gen, x);
                  }});
    return ms;
}

namespace {

std::vector<MonitorStats> summarize(const std::vector<MonitorSeries>& monitors)
{
    std::vector<MonitorStats> out;
    out.reserve(monitors.size());
    for (const MonitorSeries& m : monitors) {
        MonitorStats s;
        s.name = m.name;
        if (!m.values.empty()) {
            for (double v : m.values)
                s.max_abs = std::max(s.max_abs, std::abs(v));
            s.final = m.values.back();
            s.drift = m.values.back() - m.values.front();
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

std::vector<MonitorStats> monitor_report(const Trajectory& traj)
{
    return summarize(traj.monitors);
}

std::vector<MonitorStats> monitor_report(const BaseTrajectory& traj)
{
    return summarize(traj.monitors);
}

} // namespace contactflow
