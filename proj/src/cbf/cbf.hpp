#pragma once

#include <vector>

#include "core/vec.hpp"
#include "world/worstcase.hpp"

namespace stlshield::cbf {

// One position in the committed visit chain: the target's current pose, the
// remaining time to its (effective) entry deadline, and how much dwell time it
// will pin the agent for.
struct ChainTask {
    world::TargetSnapshot target;
    int region_id = -1;
    double tau = 0.0;              // deadline - t; negative once the deadline passed
    double dwell_remaining = 0.0;  // full dwell when not started, counts down while active
};

struct Params {
    double u_max = 1.0;
    double d_max = 0.0;
    double gamma = 1.0;
    // Containment margin (in time units of target motion) while a dwell is in
    // progress: b_dwell = -Dist(x,P) - speed * dwell_margin_time.
    double dwell_margin_time = 0.1;
    // Extra penetration depth the QP enforces during a dwell so disturbance
    // and one-step sampling jitter cannot break the in-region streak. The
    // logged/tracked barrier stays b_dwell; only the enforced level set is
    // deeper by this amount.
    double dwell_depth_margin = 0.0;
};

// Sequential CBF candidate values b_i for every task in the chain. When
// `dwell_front` is set, the front candidate is the containment barrier and
// tau[0] is expected to hold the remaining dwell duration.
std::vector<double> candidates(const Vec2& x, const std::vector<ChainTask>& chain,
                               const Params& params, bool dwell_front);

struct Critical {
    int index = 0;  // ties resolve to the smallest index
    double value = 0.0;
};
Critical critical(const std::vector<double>& values);

struct Evaluation {
    std::vector<double> values;
    int critical_index = 0;
    double value = 0.0;           // logged barrier value (b_dwell during dwells)
    double enforced_value = 0.0;  // value the QP condition uses (deeper during dwells)
    Vec2 db_dx;
    std::vector<Vec2> db_dcenter;  // per chain position; zero beyond the critical prefix
    double db_dt = 0.0;
    std::vector<int> active_tau;   // chain index attaining each tau-bar (ties -> later)
    bool singular = false;
    bool dwell_mode = false;
};

// Candidate values, the time-critical choice, and the partials the QP needs.
// While a dwell is in progress the enforced barrier is the containment
// barrier; downstream candidates are still reported.
Evaluation evaluate(const Vec2& x, const std::vector<ChainTask>& chain, const Params& params,
                    bool dwell_front);

}  // namespace stlshield::cbf
