#ifndef CONTACTFLOW_DYNAMICS_HPP
#define CONTACTFLOW_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "contactflow/geometry.hpp"
#include "contactflow/thermo.hpp"

namespace contactflow {

enum class StepMethod { Rk4Fixed, Rk45Adaptive };

/// Integration settings. t is the affine parameter of the quasi-static
/// curve, not physical time. The optional domain guard aborts the run as a
/// domain exit when it returns false at a freshly accepted point.
struct IntegratorConfig {
    StepMethod method = StepMethod::Rk4Fixed;
    double dt = 1e-3;
    double t_end = 1.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    std::function<bool(const PhasePoint&)> domain_guard;
};

struct MonitorSeries {
    std::string name;
    std::vector<double> values;
};

/// Time-indexed phase-space trajectory with attached monitor series.
struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<MonitorSeries> monitors;
};

/// Trajectory on the equilibrium base (plain coordinate vectors).
struct BaseTrajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<MonitorSeries> monitors;
};

/// Named scalar observable sampled along a phase-space trajectory.
struct Monitor {
    std::string name;
    std::function<double(double t, const PhasePoint&)> eval;
};

/// Named scalar observable sampled along a base trajectory.
struct BaseMonitor {
    std::string name;
    std::function<double(double t, const Vec&)> eval;
};

/// Integration failure carrying the last good prefix of the trajectory.
class FlowError : public std::runtime_error {
public:
    FlowError(const std::string& what, Trajectory prefix, double t_fail)
        : std::runtime_error(what), prefix_(std::move(prefix)), t_fail_(t_fail) {}
    const Trajectory& prefix() const { return prefix_; }
    double t_fail() const { return t_fail_; }

private:
    Trajectory prefix_;
    double t_fail_;
};

/// The trajectory left the admissible domain (e.g. V <= 0 or N <= 0).
class DomainExitError : public FlowError {
public:
    using FlowError::FlowError;
};

/// Base-space counterpart of FlowError.
class BaseFlowError : public std::runtime_error {
public:
    BaseFlowError(const std::string& what, BaseTrajectory prefix, double t_fail)
        : std::runtime_error(what), prefix_(std::move(prefix)), t_fail_(t_fail) {}
    const BaseTrajectory& prefix() const { return prefix_; }
    double t_fail() const { return t_fail_; }

private:
    BaseTrajectory prefix_;
    double t_fail_;
};

/// Candidate principal function W(q, t) with optional closed-form partials;
/// missing partials are backed by central differences with step
/// 1e-5*max(1,|coordinate|).
struct PrincipalFunction {
    std::string name;
    std::function<double(const Vec& q, double t)> value;
    std::function<Vec(const Vec& q, double t)> grad_q;     // optional
    std::function<double(const Vec& q, double t)> dW_dt;   // optional
    double fd_rel_step = 1e-5;

    Vec gradient_q(const Vec& q, double t) const;
    double time_partial(const Vec& q, double t) const;
};

/// Integrates xdot = X_h(x) from x0 over [0, t_end], recording monitors at
/// every accepted step (including t = 0). Throws FlowError on non-finite
/// values or step failure and DomainExitError when the guard trips.
Trajectory integrate_contact_flow(const ContactHamiltonian& h, const PhasePoint& x0,
                                  const IntegratorConfig& cfg,
                                  const std::vector<Monitor>& monitors = {});

using BaseField = std::function<Vec(double t, const Vec& q)>;

/// Integrates the base-space characteristic system qdot = field(t, q).
BaseTrajectory integrate_characteristics(const BaseField& field, const Vec& q0,
                                         const IntegratorConfig& cfg,
                                         const std::vector<BaseMonitor>& monitors = {});

/// Residual of the contact Hamilton-Jacobi equation at one sample:
/// dW/dt + h(s = W(q,t), q, p = grad_q W(q,t)).
double hj_residual_at(const PrincipalFunction& W, const ContactHamiltonian& h,
                      const Vec& q, double t);

/// max |hj_residual_at| over a grid of (q, t) samples.
double hj_residual(const PrincipalFunction& W, const ContactHamiltonian& h,
                   const std::vector<std::pair<Vec, double>>& grid);

/// Catalog of ideal-gas transformations with closed-form solutions.
enum class ProcessId {
    IsochoricEnergy,
    IsochoricEntropy,
    IsochoricIsothermal,
    IdealToInteracting,
};

struct AnalyticProcess {
    ProcessId id = ProcessId::IsochoricEnergy;
    std::string name;
    GasChart chart = GasChart::Energy;
    ContactHamiltonian hamiltonian;
    IdealGasParams params;
    InteractionParams interaction;

    GasState closed_form(const GasState& x0, double t) const;
};

/// Catalog contact Hamiltonians (closed-form gradients attached).
ContactHamiltonian isochoric_energy_hamiltonian(const IdealGasParams& params);
ContactHamiltonian isochoric_entropy_hamiltonian(const IdealGasParams& params);
ContactHamiltonian isothermal_hamiltonian();
ContactHamiltonian interacting_hamiltonian(double a);
ContactHamiltonian interacting_entropy_hamiltonian(double a);

AnalyticProcess catalog_process(ProcessId id, const IdealGasParams& params,
                                const InteractionParams& ip = {});
const std::vector<std::string>& catalog_process_names();
std::optional<ProcessId> process_id_from_name(const std::string& name);

/// Closed-form state of a catalog process at affine parameter t. Throws
/// std::invalid_argument when x0 is off the ideal-gas submanifold beyond
/// 1e-8.
GasState analytic_oracle(const AnalyticProcess& proc, const GasState& x0, double t);

/// Standard monitor set for ideal-gas runs: h, Euler residual, the two
/// gas-law residuals, and the on-submanifold defect.
std::vector<Monitor> make_gas_monitors(const ContactHamiltonian& h,
                                       const IdealGasParams& params, GasChart chart);

/// Per-monitor summary: max |value|, final value, final - initial.
struct MonitorStats {
    std::string name;
    double max_abs = 0.0;
    double final = 0.0;
    double drift = 0.0;
};

std::vector<MonitorStats> monitor_report(const Trajectory& traj);
std::vector<MonitorStats> monitor_report(const BaseTrajectory& traj);

} // namespace contactflow

#endif
