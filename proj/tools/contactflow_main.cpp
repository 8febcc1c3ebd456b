#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "contactflow/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitRuntimeError = 3;

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> tol;
    std::optional<std::string> output;
};

void apply_overrides(contactflow::Scenario& sc, const Overrides& ov)
{
    if (ov.dt)
        sc.integrator.dt = *ov.dt;
    if (ov.t_end)
        sc.integrator.t_end = *ov.t_end;
    if (ov.tol)
        sc.tol = *ov.tol;
    if (ov.output)
        sc.output.dir = *ov.output;
    if (sc.integrator.dt <= 0.0)
        throw contactflow::ScenarioParseError("--dt: must be positive");
    if (sc.integrator.t_end < 0.0)
        throw contactflow::ScenarioParseError("--t-end: must be >= 0");
}

void print_report(const contactflow::RunReport& report)
{
    std::printf("scenario %s (process %s)\n", report.scenario_name.c_str(),
                report.process.c_str());
    for (const contactflow::CheckResult& c : report.checks)
        std::printf("  [%s] %-20s value %.3e  tol %.3e%s%s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                    c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
    std::printf("  result: %s\n", report.pass ? "PASS" : "FAIL");
}

int run_one(contactflow::Scenario sc, const Overrides& ov, bool emit)
{
    apply_overrides(sc, ov);
    const contactflow::RunResult res = contactflow::run_scenario(sc);
    if (emit)
        contactflow::emit_outputs(res, sc);
    print_report(res.report);
    return res.report.pass ? kExitPass : kExitCheckFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"contactflow: contact Hamiltonian flows on the thermodynamic phase space"};
    app.require_subcommand(1);

    Overrides ov;
    std::string scenario_path;

    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("file", scenario_path, "scenario JSON document")->required();

    CLI::App* verify =
        app.add_subcommand("verify", "run the built-in scenario suite");

    CLI::App* list = app.add_subcommand("list", "list catalog processes");

    for (CLI::App* cmd : {run, verify}) {
        cmd->add_option("--dt", ov.dt, "override integrator step");
        cmd->add_option("--t-end", ov.t_end, "override end of the affine parameter range");
        cmd->add_option("--tol", ov.tol, "override endpoint tolerance");
        cmd->add_option("--output", ov.output, "override output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInputError;
    }

    try {
        if (list->parsed()) {
            for (const auto& [name, description] : contactflow::catalog_listing())
                std::printf("%-22s %s\n", name.c_str(), description.c_str());
            return kExitPass;
        }
        if (run->parsed())
            return run_one(contactflow::parse_scenario_file(scenario_path), ov, true);

        // verify: every catalog process with its default scenario and checks
        int worst = kExitPass;
        for (const auto& [name, description] : contactflow::catalog_listing()) {
            const int code =
                run_one(contactflow::default_scenario(name), ov, ov.output.has_value());
            worst = std::max(worst, code);
        }
        std::printf("verify: %s\n", worst == kExitPass ? "PASS" : "FAIL");
        return worst;
    } catch (const contactflow::ScenarioParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const contactflow::FlowError& e) {
        std::fprintf(stderr, "runtime error: %s (trajectory prefix of %zu samples kept)\n",
                     e.what(), e.prefix().times.size());
        return kExitRuntimeError;
    } catch (const contactflow::BaseFlowError& e) {
        std::fprintf(stderr, "runtime error: %s (trajectory prefix of %zu samples kept)\n",
                     e.what(), e.prefix().times.size());
        return kExitRuntimeError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntimeError;
    }
}
