#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "exp/config.hpp"

namespace stlshield::exp {

struct EvalReport {
    int episodes = 0;
    std::string mode;
    std::string policy;
    double satisfaction_rate = 0.0;
    double relaxation_mean = 0.0;
    double relaxation_max = 0.0;
    double mean_return = 0.0;
    double eps_max = 0.0;
    double eps_mean_episode_max = 0.0;
    int episodes_with_slack = 0;
    bool bound_pass = true;
    double bound_min_margin = 0.0;
    bool hard_link_ok = true;   // every eps<=1e-6 episode is monitor-satisfied
    bool relaxation_ok = true;  // late hits within eps_max/gamma + tol_disc

    nlohmann::json to_json() const;
};

// Evaluates `episodes` episodes in parallel with per-episode seeds derived
// from the master seed; aggregation is order-independent. The first
// `keep_logs` episodes keep their full rows/trajectory for CSV export.
EvalReport evaluate(const ExperimentConfig& cfg, rl::Policy& policy, int episodes,
                    rl::Mode mode, int workers, int keep_logs,
                    std::vector<rl::EpisodeResult>* kept);

struct RunResult {
    EvalReport report;
    nlohmann::json report_json;
    std::string report_path;
    bool asserts_passed = true;
};

// Full `run` command: optional training, evaluation, CSV/report/plot emission
// under out_dir (falls back to cfg.output.dir when empty).
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Builds the policy named by cfg.eval.policy ("trained" loads the checkpoint
// or trains when absent; curve rows are appended to *curve when given).
std::unique_ptr<rl::Policy> make_policy(const ExperimentConfig& cfg,
                                        std::vector<rl::CurvePoint>* curve);

void write_episode_csv(const std::string& path, const ExperimentConfig& cfg,
                       const rl::EpisodeResult& ep, int episode_index);

}  // namespace stlshield::exp
