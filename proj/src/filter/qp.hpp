#pragma once

#include <string>

#include "core/vec.hpp"

namespace stlshield::filter {

// minimize ||u||^2 + k_eps * eps
// s.t.  a . (u + u_rl) + eps >= r,   ||u + u_rl|| <= u_max,   eps >= 0
// where r = -(db_dtarget . u_target + db_dt + gamma * b). Solved exactly by
// enumerating the stationary points of the two quadratic pieces and the
// boundary intersections.
struct QpProblem {
    Vec2 a{0.0, 0.0};  // db/dx of the critical CBF
    double r = 0.0;
    Vec2 u_rl{0.0, 0.0};
    double u_max = 1.0;
    double k_eps = 1e4;
};

struct QpSolution {
    Vec2 u_cbf{0.0, 0.0};
    double eps = 0.0;
    std::string active_set;  // "none", "cbf", "ball", "ball+cbf", "slack", "slack+ball"
    double objective = 0.0;
};

QpSolution solve_qp(const QpProblem& problem);

// Final control u_rl + u_cbf (norm stays within u_max + 1e-8 by construction).
Vec2 compose(const Vec2& u_rl, const QpSolution& sol);

}  // namespace stlshield::filter
