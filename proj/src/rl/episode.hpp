#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filter/bound.hpp"
#include "filter/qp.hpp"
#include "rl/policy.hpp"
#include "stl/eval.hpp"
#include "stl/obligation.hpp"

namespace stlshield::rl {

enum class Mode { Shielded, Unshielded };

struct EpisodeOptions {
    long steps = 3000;  // T steps -> T+1 samples
    Mode mode = Mode::Shielded;
    seq::Params seq_params;
    double k_eps = 1e4;
    ObsLayout obs_layout;
    bool record_rows = false;  // keep full per-step rows (memory heavy)
    bool record_traj = false;  // keep the monitoring trajectory in the result
    bool track_all_regions = false;  // snapshot every world region, not just spec ones
    bool run_monitor = true;
    std::optional<Vec2> forced_x0;  // skip feasible-state sampling when set
};

struct StepRow {
    double t = 0.0;
    Vec2 x;
    Vec2 u_rl;
    Vec2 u_cbf;
    double eps = 0.0;
    double b_value = 0.0;
    bool has_constraint = false;
    int critical_task = -1;   // 0-based chain index, -1 when no constraint
    int active_region = -1;   // world region index of the front target
    int qp_active_set = 0;    // 0 none, 1 cbf, 2 ball, 3 ball+cbf, 4 slack, 5 slack+ball
    Vec2 db_dx;               // partials of the enforced barrier
    double db_dt = 0.0;
    double reward = 0.0;
};

struct HitRecord {
    int obligation_id = 0;
    int task_index = 0;
    double entry_time = 0.0;  // first sample of the successful visit/dwell
    double hit_time = 0.0;    // dwell completion (== entry for plain visits)
    double deadline = 0.0;    // true deadline active for this hit
    double seg_eps_max = 0.0;
};

struct MissRecord {
    int obligation_id = 0;
    int task_index = 0;
    double deadline = 0.0;
    double delay = 0.0;  // (episode end + dt) - deadline
};

struct EpisodeResult {
    std::uint64_t seed = 0;
    Vec2 x0;
    bool feasible_start = false;
    double return_sum = 0.0;
    bool stl_satisfied = false;
    bool monitored = false;
    double eps_max = 0.0;
    bool eps_small = true;  // eps_max <= 1e-6
    bool bound_ok = true;
    double bound_min_margin = 0.0;
    bool relaxation_ok = true;
    double max_delay = 0.0;
    std::vector<HitRecord> hits;
    std::vector<MissRecord> misses;
    std::vector<StepRow> rows;
    stl::Trajectory traj;
};

// Runs one full Algorithm-1 inner loop: sample x0 (unless forced), generate a
// feasible sequence, per step compose the policy action with the QP
// correction while the sequence is non-empty, step the world, record the
// transition, process hits, and refresh the front alternative. The result
// carries the offline monitor verdict when requested.
EpisodeResult run_episode(const world::WorldConfig& world_cfg, Policy& policy,
                          const stl::FormulaPtr& spec, const stl::TaskSet& tasks,
                          const EpisodeOptions& opts, std::uint64_t seed,
                          ReplayBuffer* buffer = nullptr);

}  // namespace stlshield::rl
