#pragma once

#include <string>

#include <json.hpp>

#include "rl/train.hpp"
#include "seq/sequence.hpp"
#include "stl/obligation.hpp"
#include "world/world.hpp"

namespace stlshield::exp {

struct ShieldConfig {
    double gamma = 1.0;
    double k_eps = 1e4;
    double feasibility_margin = 0.0;
    double deadline_margin = 0.0;
    double dwell_margin_steps = 1.0;  // containment margin, in multiples of dt
    int sample_budget = 10000;
};

struct EvalConfig {
    int episodes = 100;
    std::string mode = "shielded";   // or "unshielded"
    std::string policy = "random";   // "random" | "greedy" | "trained"
    int workers = 0;                 // 0 = hardware concurrency
    int save_logs = 2;               // episode CSVs written to disk
    double assert_satisfaction_min = -1.0;  // < 0: not asserted
    bool assert_bound = false;
};

struct OutputConfig {
    std::string dir = "out";
    bool plots = true;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    world::WorldConfig world;
    std::string spec_text;
    stl::FormulaPtr spec;
    stl::TaskSet tasks;
    ShieldConfig shield;
    rl::TrainConfig train;
    double horizon = 300.0;  // episode length in time units
    bool do_train = false;
    std::string checkpoint;  // load (if exists) / save path for the trained policy
    EvalConfig eval;
    OutputConfig output;

    long episode_steps() const {
        return static_cast<long>(std::llround(horizon / world.dt));
    }
    seq::Params seq_params() const;
    rl::ObsLayout obs_layout() const;
    rl::EpisodeOptions episode_options() const;
};

// Parses and validates; error messages carry the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json load_json_file(const std::string& path);

// World block alone (the monitor needs region geometry without a full
// experiment).
world::WorldConfig parse_world(const nlohmann::json& j, const std::string& path_prefix = "world");

// Sets a dot-path key ("eval.episodes") to a JSON-parsed value (falls back to
// a string when the value is not valid JSON).
void apply_override(nlohmann::json& j, const std::string& dot_key, const std::string& value);

}  // namespace stlshield::exp
