#pragma once

#include "core/vec.hpp"

namespace stlshield::world {

enum class ShapeKind { Disk, Rect };

// A compact convex 2D set described relative to its center. Disks carry a
// radius, rectangles are axis-aligned with half extents.
struct Shape {
    ShapeKind kind = ShapeKind::Disk;
    double radius = 0.0;
    Vec2 half{0.0, 0.0};

    static Shape disk(double radius) {
        Shape s;
        s.kind = ShapeKind::Disk;
        s.radius = radius;
        return s;
    }
    static Shape rect(Vec2 half_extents) {
        Shape s;
        s.kind = ShapeKind::Rect;
        s.half = half_extents;
        return s;
    }
};

struct GradResult {
    Vec2 grad{0.0, 0.0};
    bool singular = false;  // disk center / rectangle skeleton
};

// Signed distance from point p to the set (negative inside, 0 on the boundary).
double signed_distance(const Vec2& p, const Shape& shape, const Vec2& center);

// Gradient of signed_distance with respect to p. At non-differentiable points
// (disk center, rectangle medial skeleton) returns zero and sets `singular`.
GradResult signed_distance_grad(const Vec2& p, const Shape& shape, const Vec2& center);

// sup_{x in A} signed_distance(x, B). Exact for disk/rect pairs.
double sup_signed_distance(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb);

// sup_{x in A} inf_{y in B} ||x - y|| == max(0, sup_signed_distance).
double sup_inf_distance(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb);

// Gradients of sup_inf_distance with respect to the two centers. Zero when the
// sup-inf term is clamped at 0.
struct PairGrad {
    Vec2 d_ca{0.0, 0.0};
    Vec2 d_cb{0.0, 0.0};
    bool singular = false;
};
PairGrad sup_inf_distance_grad(const Shape& a, const Vec2& ca, const Shape& b, const Vec2& cb);

}  // namespace stlshield::world
