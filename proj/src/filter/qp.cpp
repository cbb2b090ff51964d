#include "filter/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace stlshield::filter {

namespace {

struct Candidate {
    Vec2 v;  // executed control u + u_rl
    const char* tag;
};

}  // namespace

QpSolution solve_qp(const QpProblem& p) {
    if (p.u_max <= 0.0) throw Error(ErrorCode::Argument, "solve_qp: u_max must be positive");
    if (p.k_eps <= 0.0) throw Error(ErrorCode::Argument, "solve_qp: k_eps must be positive");

    const Vec2& a = p.a;
    const double a2 = norm_sq(a);
    const double feas_tol = 1e-12 * std::max(1.0, p.u_max);

    // Work in v = u + u_rl. For fixed v the optimal slack is
    // max(0, r - a.v); the objective becomes ||v - u_rl||^2 + k*max(0, r - a.v),
    // a convex piecewise quadratic over the input disk.
    std::vector<Candidate> cands;
    cands.reserve(7);

    // Unconstrained minimum of the eps == 0 piece.
    cands.push_back({p.u_rl, "none"});
    // Unconstrained minimum of the eps > 0 piece: 2(v - u_rl) = k a.
    cands.push_back({p.u_rl + a * (p.k_eps * 0.5), "slack"});
    if (a2 > 0.0) {
        // Projection of u_rl onto the constraint line a.v = r (piece boundary).
        cands.push_back({p.u_rl + a * ((p.r - dot(a, p.u_rl)) / a2), "cbf"});
    }
    // Disk-boundary minima of the two pieces.
    Vec2 dir1 = unit_or_zero(p.u_rl);
    if (norm(dir1) > 0.0) cands.push_back({dir1 * p.u_max, "ball"});
    Vec2 dir2 = unit_or_zero(p.u_rl + a * (p.k_eps * 0.5));
    if (norm(dir2) > 0.0) cands.push_back({dir2 * p.u_max, "slack+ball"});
    // Intersections of the constraint line with the disk boundary.
    if (a2 > 0.0) {
        double an = std::sqrt(a2);
        double h = p.r / an;  // distance of the line from the origin
        if (std::fabs(h) <= p.u_max) {
            Vec2 n = a / an;
            Vec2 tangent{-n.y, n.x};
            double half = std::sqrt(std::max(0.0, p.u_max * p.u_max - h * h));
            cands.push_back({n * h + tangent * half, "ball+cbf"});
            cands.push_back({n * h - tangent * half, "ball+cbf"});
        }
    }

    double best_obj = std::numeric_limits<double>::infinity();
    Candidate best{p.u_rl, "none"};
    for (const auto& c : cands) {
        if (norm(c.v) > p.u_max + feas_tol) continue;
        Vec2 v = clamp_to_ball(c.v, p.u_max);
        double eps = std::max(0.0, p.r - dot(a, v));
        double obj = norm_sq(v - p.u_rl) + p.k_eps * eps;
        if (obj < best_obj - 1e-15) {
            best_obj = obj;
            best = {v, c.tag};
        }
    }

    QpSolution sol;
    sol.u_cbf = best.v - p.u_rl;
    sol.eps = std::max(0.0, p.r - dot(a, best.v));
    sol.objective = best_obj;
    sol.active_set = best.tag;
    return sol;
}

Vec2 compose(const Vec2& u_rl, const QpSolution& sol) {
    return u_rl + sol.u_cbf;
}

}  // namespace stlshield::filter
