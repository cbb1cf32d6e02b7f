#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "lfcov/plot.hpp"
#include "lfcov/scenario.hpp"
#include "lfcov/selfcheck.hpp"
#include "lfcov/simulator.hpp"

namespace fs = std::filesystem;
using namespace lfcov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFault = 2;

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> stride) {
    Scenario sc;
    try {
        sc = load_scenario_file(scenario_path);
        if (seed) sc.seed = *seed;
        if (stride) sc.log_stride = *stride;
        if (sc.log_stride < 1) throw ConfigError("log_stride: must be >= 1");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    fs::create_directories(out_dir);
    RunResult result;
    try {
        result = run(sc);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        // Planning failed; report it in the output files like any fault.
        result.summary.completed = false;
        result.summary.fault = FaultRecord{"PlanningFailed", e.what(), 0.0};
    }

    std::ofstream log(fs::path(out_dir) / "run.jsonl");
    size_t last_written = 0;
    for (size_t k = 0; k < result.records.size(); ++k) {
        if (k % sc.log_stride == 0) {
            write_run_log_record(log, result.records[k]);
            last_written = k;
        }
    }
    if (result.summary.fault) {
        if (!result.records.empty() && last_written + 1 != result.records.size()) {
            write_run_log_record(log, result.records.back());
        }
        write_fault_record(log, *result.summary.fault);
    }
    log.close();

    std::ofstream summary(fs::path(out_dir) / "summary.json");
    summary << serialize_summary(result.summary);
    summary.close();

    std::ofstream csv(fs::path(out_dir) / "metrics.csv");
    std::vector<StepRecord> strided;
    for (size_t k = 0; k < result.records.size(); ++k) {
        if (k % sc.log_stride == 0) strided.push_back(result.records[k]);
    }
    write_metrics_csv(csv, strided);
    csv.close();

    if (result.summary.fault) {
        std::cerr << "simulation fault: " << result.summary.fault->type << ": "
                  << result.summary.fault->message << "\n";
        return kExitFault;
    }
    return kExitOk;
}

int cmd_plan(const std::string& scenario_path, const std::string& out_path) {
    try {
        const Scenario sc = load_scenario_file(scenario_path);
        const ReferencePath path = plan_potential_field(sc.start, sc.goal, sc.obstacles,
                                                        sc.planner, sc.v_ref);
        save_path_file(out_path, path);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "planning failed: " << e.what() << "\n";
        return kExitFault;
    }
}

int cmd_plot(const std::string& log_path, const std::string& out_dir,
             const std::vector<double>& frames, const std::string& scenario_path) {
    try {
        const RunLog log = load_run_log(log_path);
        fs::create_directories(out_dir);

        std::ofstream metrics(fs::path(out_dir) / "metrics.svg");
        metrics << render_metrics_svg(log.records);
        metrics.close();

        Scenario sc;
        ReferencePath path;
        FrameContext ctx;
        if (!scenario_path.empty()) {
            sc = load_scenario_file(scenario_path);
            path = sc.path_file ? load_path_file(*sc.path_file)
                                : plan_potential_field(sc.start, sc.goal, sc.obstacles,
                                                       sc.planner, sc.v_ref);
            ctx.scenario = &sc;
            ctx.path = &path;
        }

        for (double t : frames) {
            if (t < log.records.front().time - 1e-9 || t > log.records.back().time + 1e-9) {
                throw FrameTimeOutOfRange("frame time " + std::to_string(t) +
                                          " outside the logged range");
            }
            size_t best = 0;
            for (size_t i = 1; i < log.records.size(); ++i) {
                if (std::abs(log.records[i].time - t) <
                    std::abs(log.records[best].time - t)) {
                    best = i;
                }
            }
            ctx.head_trajectory.clear();
            for (size_t i = 0; i <= best; ++i) {
                ctx.head_trajectory.push_back(
                    (log.records[i].leaders[0] + log.records[i].leaders[1]) * 0.5);
            }
            char name[64];
            std::snprintf(name, sizeof(name), "frame_%g.svg", t);
            std::ofstream frame(fs::path(out_dir) / name);
            frame << render_frame_svg(log.records[best], ctx);
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_check(const std::string& suite) {
    std::vector<CheckResult> results;
    try {
        results = run_check_suite(suite);
    } catch (const UnknownSuite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    bool all_pass = true;
    for (const CheckResult& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitFault;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leader-follower coverage control simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", out_path = "path.json";
    std::string log_path, plot_scenario, suite = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> stride;
    std::vector<double> frames;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write logs");
    run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    run_cmd->add_option("--log-stride", stride, "Record every Nth step");

    auto* plan_cmd = app.add_subcommand("plan", "Plan the reference path only");
    plan_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    plan_cmd->add_option("--out", out_path, "Path JSON output file")->required();

    auto* plot_cmd = app.add_subcommand("plot", "Render metrics and frames from a run log");
    plot_cmd->add_option("--log", log_path, "run.jsonl from a previous run")->required();
    plot_cmd->add_option("--out", out_dir, "Output directory")->required();
    plot_cmd->add_option("--frames", frames, "Frame times in seconds")->delimiter(',');
    plot_cmd->add_option("--scenario", plot_scenario,
                         "Scenario file; enables obstacles, path and the virtual inset");

    auto* check_cmd = app.add_subcommand("check", "Run a property suite");
    check_cmd->add_option("--suite", suite, "energy, geometry, coverage, e2e or all");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, seed, stride);
    if (plan_cmd->parsed()) return cmd_plan(scenario_path, out_path);
    if (plot_cmd->parsed()) return cmd_plot(log_path, out_dir, frames, plot_scenario);
    if (check_cmd->parsed()) return cmd_check(suite);
    return kExitConfig;
}
