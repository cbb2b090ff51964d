#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cbf/cbf.hpp"
#include "core/rng.hpp"
#include "stl/obligation.hpp"
#include "world/world.hpp"

namespace stlshield::seq {

// One planned region visit. Recurring obligations are unrolled into several
// planned hits whose deadlines roll forward as actual hits land.
struct PlannedHit {
    int obligation_id = 0;
    int task_index = 0;
    std::vector<int> alt_regions;  // world region indices (non-empty)
    int chosen_alt = 0;
    double release = 0.0;
    double deadline = 0.0;  // true deadline; enforcement margin applied when building chains
    double dwell = 0.0;
    bool recurring = false;
    double recurrence = 0.0;
    double coverage = 0.0;

    int region() const { return alt_regions[static_cast<std::size_t>(chosen_alt)]; }
};

struct SequenceState {
    std::vector<PlannedHit> pending;  // front first; removal only from the front
    // Dwell progress of the front obligation.
    bool dwell_active = false;
    long dwell_samples = 0;       // consecutive in-region samples so far
    long dwell_samples_needed = 0;

    bool empty() const { return pending.empty(); }
    double remaining_dwell(double dt) const {
        if (!dwell_active) return pending.empty() ? 0.0 : pending.front().dwell;
        return static_cast<double>(dwell_samples_needed - dwell_samples) * dt;
    }
};

struct Params {
    double u_max = 1.0;
    double d_max = 0.0;
    double gamma = 1.0;
    double dt = 0.1;
    double feasibility_margin = 0.0;  // require b_i >= margin at generation time
    double deadline_margin = 0.0;     // enforce deadlines this much early
    double dwell_margin_time = 0.1;
    int sample_budget = 10000;

    cbf::Params cbf() const {
        cbf::Params p{u_max, d_max, gamma, dwell_margin_time, 0.0};
        p.dwell_depth_margin = d_max / gamma + 2.0 * (u_max + d_max) * dt;
        return p;
    }
};

// Required consecutive in-region samples for a dwell of the given duration:
// the entry sample plus ceil(dwell/dt) more, so the covered span is >= dwell.
long dwell_samples_needed(double dwell, double dt);

// Unrolls obligations into per-obligation planned-hit lists. Recurring tasks
// get ceil((b-a)/c) + 1 hits with deadlines min(a + i*c, b + c). Region names
// resolve against the world config; unknown names raise Error(Config).
std::vector<std::vector<PlannedHit>> unroll(const stl::TaskSet& tasks,
                                            const world::WorldConfig& world_cfg);

world::TargetSnapshot snapshot(const world::World& w, int region_idx);

// Visit chain for the CBF, using margin-adjusted deadlines. When the front
// dwell is active its tau is the remaining dwell duration.
std::vector<cbf::ChainTask> build_chain(const SequenceState& seq, const world::World& w, double t,
                                        const Params& params);

// Enumerates interleavings of the per-obligation hit lists (per-task order
// preserved) in earliest-deadline-first order and returns the first one whose
// sequential CBF candidates all clear the feasibility margin at (x, t).
// `on_candidate`, when set, observes every enumerated candidate in order.
std::optional<SequenceState> generate_sequence(
    const Vec2& x, double t, const std::vector<std::vector<PlannedHit>>& per_task,
    const world::World& w, const Params& params,
    const std::function<void(const std::vector<PlannedHit>&)>& on_candidate = nullptr);

// Rejection-samples arena points until generate_sequence succeeds. Throws
// Error(Infeasible) with a diagnostic after the attempt budget.
Vec2 sample_feasible_state(const std::vector<std::vector<PlannedHit>>& per_task,
                           const world::World& w, const Params& params, Rng& rng);

// Minimum candidate value of the current chain (recomputation helper).
double min_candidate(const SequenceState& seq, const world::World& w, double t,
                     const Params& params);

// Front hit landed at t_hit: removes it, re-rolls deadlines of the remaining
// planned hits of a recurring obligation (next deadline t_hit + c), drops them
// once a hit lands at or past the coverage time, and appends a planned hit if
// the unroll ran out before coverage.
void on_hit(SequenceState& seq, double t_hit);

// Alg.-1 alternative refresh: re-picks the front's alternative by the highest
// full-sequence critical CBF value; ties keep the incumbent. No-op during an
// active dwell.
void maybe_swap_alternative(SequenceState& seq, const world::World& w, const Vec2& x, double t,
                            const Params& params);

}  // namespace stlshield::seq
