// stlshield command line: run experiments, monitor trajectory logs, re-render
// plots, and validate configs. Talks to the core exclusively through the
// shared library's C API.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stlshield/stlshield.h"

namespace {

struct StringOut {
    char* value = nullptr;
    ~StringOut() { ss_string_free(value); }
};

int fail(ss_status status, const char* what) {
    std::fprintf(stderr, "%s: %s: %s\n", what, ss_status_name(status), ss_last_error());
    return 2;
}

struct ExperimentHandle {
    ss_experiment* e = nullptr;
    ~ExperimentHandle() { ss_experiment_free(e); }
};

int load_with_overrides(const std::string& config_path,
                        const std::vector<std::string>& overrides, ExperimentHandle& handle) {
    if (ss_status s = ss_experiment_load_file(config_path.c_str(), &handle.e)) {
        return fail(s, "loading config");
    }
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "override '%s' must look like key.path=value\n", kv.c_str());
            return 2;
        }
        std::string key = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);
        if (ss_status s = ss_experiment_set(handle.e, key.c_str(), value.c_str())) {
            return fail(s, "applying override");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STL-shielded learning simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "train and/or evaluate an experiment config");
    std::string run_config;
    std::string run_out;
    std::vector<std::string> run_sets;
    int run_episodes = -1;
    std::string run_policy, run_mode;
    long run_seed = -1;
    bool run_assert = false;
    run->add_option("--config", run_config, "experiment config JSON")->required();
    run->add_option("--out", run_out, "output directory (default: config output.dir)");
    run->add_option("--set", run_sets, "override, e.g. --set eval.episodes=500");
    run->add_option("--episodes", run_episodes, "shorthand for eval.episodes");
    run->add_option("--policy", run_policy, "shorthand for eval.policy (random|greedy|trained)");
    run->add_option("--mode", run_mode, "shorthand for eval.mode (shielded|unshielded)");
    run->add_option("--seed", run_seed, "shorthand for seed");
    run->add_flag("--assert", run_assert, "exit nonzero when configured thresholds fail");

    // monitor
    auto* monitor = app.add_subcommand("monitor", "evaluate a specification over a trajectory CSV");
    std::string mon_spec, mon_traj, mon_config;
    monitor->add_option("--spec", mon_spec, "specification text")->required();
    monitor->add_option("--traj", mon_traj, "trajectory CSV path")->required();
    monitor->add_option("--config", mon_config, "config supplying region shapes");

    // plot
    auto* plot = app.add_subcommand("plot", "re-render SVG plots from a run directory's CSVs");
    std::string plot_dir;
    plot->add_option("--run-dir", plot_dir, "directory holding run CSVs")->required();

    // validate-config
    auto* validate = app.add_subcommand("validate-config", "check a config and print a summary");
    std::string val_config;
    std::vector<std::string> val_sets;
    validate->add_option("--config", val_config, "experiment config JSON")->required();
    validate->add_option("--set", val_sets, "override, e.g. --set eval.episodes=500");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        ExperimentHandle handle;
        std::vector<std::string> overrides = run_sets;
        if (run_episodes >= 0) overrides.push_back("eval.episodes=" + std::to_string(run_episodes));
        if (!run_policy.empty()) overrides.push_back("eval.policy=\"" + run_policy + "\"");
        if (!run_mode.empty()) overrides.push_back("eval.mode=\"" + run_mode + "\"");
        if (run_seed >= 0) overrides.push_back("seed=" + std::to_string(run_seed));
        if (int rc = load_with_overrides(run_config, overrides, handle)) return rc;

        StringOut report;
        int asserts_ok = 1;
        if (ss_status s = ss_experiment_run(handle.e, run_out.empty() ? nullptr : run_out.c_str(),
                                            &report.value, &asserts_ok)) {
            return fail(s, "run");
        }
        std::printf("%s\n", report.value);
        if (run_assert && !asserts_ok) {
            std::fprintf(stderr, "assert thresholds failed\n");
            return 1;
        }
        return 0;
    }

    if (monitor->parsed()) {
        int verdict = 0;
        StringOut report;
        if (ss_status s = ss_monitor_csv(mon_spec.c_str(), mon_traj.c_str(),
                                         mon_config.empty() ? nullptr : mon_config.c_str(),
                                         &verdict, &report.value)) {
            return fail(s, "monitor");
        }
        std::printf("%s", report.value);
        return verdict ? 0 : 1;
    }

    if (plot->parsed()) {
        if (ss_status s = ss_plot_render(plot_dir.c_str())) return fail(s, "plot");
        std::printf("plots rendered under %s\n", plot_dir.c_str());
        return 0;
    }

    if (validate->parsed()) {
        ExperimentHandle handle;
        if (int rc = load_with_overrides(val_config, val_sets, handle)) return rc;
        StringOut summary;
        if (ss_status s = ss_experiment_validate(handle.e, &summary.value)) {
            return fail(s, "validate-config");
        }
        std::printf("config ok\n%s", summary.value);
        return 0;
    }
    return 0;
}
