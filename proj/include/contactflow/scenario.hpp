#ifndef CONTACTFLOW_SCENARIO_HPP
#define CONTACTFLOW_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "contactflow/dynamics.hpp"
#include "contactflow/generic_oc.hpp"

namespace contactflow {

/// Malformed or inconsistent scenario document; the message names the field.
class ScenarioParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OutputSpec {
    std::string dir = ".";
    bool long_format = false;
};

/// One configured run: a catalog gas process or an Onsager-Casimir system,
/// the representation to integrate in, initial data, integrator settings,
/// and the checks to evaluate.
struct Scenario {
    std::string name;
    std::string process;
    GasChart representation = GasChart::Energy;
    IdealGasParams params;
    InteractionParams interaction;
    GasState initial;              // gas processes
    Vec q0;                        // onsager-casimir
    std::optional<OCSystem> oc;
    IntegratorConfig integrator;
    double tol = 1e-6;
    std::vector<std::string> checks;
    OutputSpec output;

    bool is_gas() const { return process != "onsager-casimir"; }
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct RunReport {
    std::string scenario_name;
    std::string process;
    std::string representation;
    double dt = 0.0;
    double t_end = 0.0;
    bool is_gas = true;
    bool pass = false;
    std::optional<GasState> endpoint;
    std::optional<GasState> oracle;
    std::vector<std::pair<std::string, double>> endpoint_rel_errors;
    Vec endpoint_q;
    std::vector<MonitorStats> monitors;
    std::vector<CheckResult> checks;
};

struct RunResult {
    RunReport report;
    Trajectory trajectory;   // populated for gas runs
    BaseTrajectory base;     // populated for onsager-casimir runs
};

/// Parses and validates a JSON scenario document, applying defaults
/// (A = 1, C = 3/2, dt = 1e-3, t_end = 1, tol = 1e-6).
Scenario parse_scenario(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

/// Runnable defaults for every catalog process id plus "onsager-casimir".
Scenario default_scenario(const std::string& process_name);

/// Process ids accepted by `process`, with one-line descriptions.
std::vector<std::pair<std::string, std::string>> catalog_listing();

/// Integrates the scenario, evaluates its checks, and assembles the report.
/// Integration failures propagate as FlowError/BaseFlowError with the
/// trajectory prefix preserved.
RunResult run_scenario(const Scenario& sc);

/// Fixed-schema trajectory table. Gas runs use the column contract
/// t,s,q1,q2,q3,p1,p2,p3,h,euler,gaslaw_pv,gaslaw_eq,onL; base runs use
/// t,q1..qn followed by monitor names.
std::string trajectory_csv(const RunResult& res);

/// Plot-ready long format: t,series,value.
std::string long_format_csv(const RunResult& res);

/// Report document mirroring RunReport.
std::string report_json(const RunReport& report);

/// Writes <name>_trajectory.csv and <name>_report.json (plus the long-format
/// table when requested) under the scenario's output directory. Throws
/// std::runtime_error naming the path on I/O failure.
void emit_outputs(const RunResult& res, const Scenario& sc);

} // namespace contactflow

#endif
