#pragma once

#include "core/error.hpp"
#include "world/geometry.hpp"

namespace stlshield::world {

// Current pose of a target set plus its speed bound; all the worst-case
// distance math needs.
struct TargetSnapshot {
    Shape shape;
    Vec2 center{0.0, 0.0};
    double speed_max = 0.0;
};

// Dist(x, P) + u_P,max * tau; signed distance inflated by the farthest the
// target can move within the remaining time.
inline double dist_wc_agent(const Vec2& x, const TargetSnapshot& p, double tau) {
    if (tau < 0.0) throw Error(ErrorCode::Argument, "dist_wc_agent: negative remaining time");
    return signed_distance(x, p.shape, p.center) + p.speed_max * tau;
}

// sup-inf distance between ordered targets inflated by both motion budgets.
inline double dist_wc_pair(const TargetSnapshot& pi, const TargetSnapshot& pj, double tau_i,
                           double tau_j) {
    if (tau_i < 0.0 || tau_j < 0.0) {
        throw Error(ErrorCode::Argument, "dist_wc_pair: negative remaining time");
    }
    return sup_inf_distance(pi.shape, pi.center, pj.shape, pj.center) + pi.speed_max * tau_i +
           pj.speed_max * tau_j;
}

}  // namespace stlshield::world
