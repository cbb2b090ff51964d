#pragma once

#include <cmath>

namespace stlshield {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double norm_sq(const Vec2& a) { return a.x * a.x + a.y * a.y; }

// Unit vector of a, or (0,0) when ||a|| is negligible.
inline Vec2 unit_or_zero(const Vec2& a, double eps = 1e-12) {
    double n = norm(a);
    if (n < eps) return {0.0, 0.0};
    return a / n;
}

// Scales v into the closed ball of the given radius (no-op when already inside).
inline Vec2 clamp_to_ball(const Vec2& v, double radius) {
    double n = norm(v);
    if (n <= radius || n == 0.0) return v;
    return v * (radius / n);
}

}  // namespace stlshield
