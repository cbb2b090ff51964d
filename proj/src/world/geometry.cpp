#include "world/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stlshield::world {

namespace {

constexpr double kSingularEps = 1e-12;

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

std::array<Vec2, 4> rect_corners(const Shape& s, const Vec2& c) {
    return {Vec2{c.x - s.half.x, c.y - s.half.y}, Vec2{c.x + s.half.x, c.y - s.half.y},
            Vec2{c.x - s.half.x, c.y + s.half.y}, Vec2{c.x + s.half.x, c.y + s.half.y}};
}

}  // namespace

double signed_distance(const Vec2& p, const Shape& shape, const Vec2& center) {
    if (shape.kind == ShapeKind::Disk) {
        return norm(p - center) - shape.radius;
    }
    Vec2 d = p - center;
    Vec2 q{std::fabs(d.x) - shape.half.x, std::fabs(d.y) - shape.half.y};
    Vec2 qp{std::max(q.x, 0.0), std::max(q.y, 0.0)};
    double outside = norm(qp);
    double inside = std::min(std::max(q.x, q.y), 0.0);
    return outside + inside;
}

GradResult signed_distance_grad(const Vec2& p, const Shape& shape, const Vec2& center) {
    GradResult res;
    if (shape.kind == ShapeKind::Disk) {
        Vec2 d = p - center;
        double n = norm(d);
        if (n < kSingularEps) {
            res.singular = true;
            return res;
        }
        res.grad = d / n;
        return res;
    }
    Vec2 d = p - center;
    Vec2 q{std::fabs(d.x) - shape.half.x, std::fabs(d.y) - shape.half.y};
    if (q.x > 0.0 && q.y > 0.0) {
        Vec2 qp{q.x, q.y};
        double n = norm(qp);
        res.grad = {q.x * sign_of(d.x) / n, q.y * sign_of(d.y) / n};
        return res;
    }
    if (q.x > 0.0) {
        res.grad = {sign_of(d.x), 0.0};
        return res;
    }
    if (q.y > 0.0) {
        res.grad = {0.0, sign_of(d.y)};
        return res;
    }
    // Inside: gradient follows the larger q component; ties are the skeleton.
    if (std::fabs(q.x - q.y) < kSingularEps) {
        res.singular = true;
        return res;
    }
    if (q.x > q.y) {
        if (std::fabs(d.x) < kSingularEps) {
            res.singular = true;
            return res;
        }
        res.grad = {sign_of(d.x), 0.0};
    } else {
        if (std::fabs(d.y) < kSingularEps) {
            res.singular = true;
            return res;
        }
        res.grad = {0.0, sign_of(d.y)};
    }
    return res;
}

double sup_signed_distance(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb) {
    // Signed distance to a convex set is convex and 1-Lipschitz, so the sup
    // over a disk is attained along the gradient ray (value + radius) and the
    // sup over a rectangle is attained at a corner.
    if (a.kind == ShapeKind::Disk) {
        return signed_distance(ca, b, cb) + a.radius;
    }
    double best = -1e300;
    for (const Vec2& corner : rect_corners(a, ca)) {
        best = std::max(best, signed_distance(corner, b, cb));
    }
    return best;
}

double sup_inf_distance(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb) {
    return std::max(0.0, sup_signed_distance(a, ca, b, cb));
}

PairGrad sup_inf_distance_grad(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb) {
    PairGrad out;
    if (sup_signed_distance(a, ca, b, cb) <= 0.0) {
        return out;  // clamped at zero
    }
    Vec2 probe = ca;
    if (a.kind == ShapeKind::Rect) {
        double best = -1e300;
        for (const Vec2& corner : rect_corners(a, ca)) {
            double v = signed_distance(corner, b, cb);
            if (v >= best) {  // ties pick the later corner, deterministically
                best = v;
                probe = corner;
            }
        }
    }
    GradResult g = signed_distance_grad(probe, b, cb);
    out.singular = g.singular;
    out.d_ca = g.grad;       // the probe point translates with A
    out.d_cb = -g.grad;
    return out;
}

}  // namespace stlshield::world
