#include "world/region.hpp"

#include <cmath>

namespace stlshield::world {

namespace {

// Position along a reflected segment walk, parameterized by arclength.
Vec2 patrol_position(const Script& s, double arc) {
    double len = norm(s.b - s.a);
    if (len < 1e-12) return s.a;
    double cycle = 2.0 * len;
    double m = std::fmod(arc, cycle);
    if (m < 0.0) m += cycle;
    double along = (m <= len) ? m : cycle - m;
    return s.a + (s.b - s.a) * (along / len);
}

Vec2 circle_position(const Script& s, double angle) {
    return s.a + Vec2{s.orbit_radius * std::cos(angle), s.orbit_radius * std::sin(angle)};
}

double reflect_into(double v, double lo, double hi) {
    if (hi <= lo) return lo;
    double span = hi - lo;
    double m = std::fmod(v - lo, 2.0 * span);
    if (m < 0.0) m += 2.0 * span;
    return lo + (m <= span ? m : 2.0 * span - m);
}

}  // namespace

RegionState region_reset(const RegionSpec& spec) {
    RegionState st;
    switch (spec.script.kind) {
        case Script::Kind::Circle:
            st.angle = spec.script.phase0;
            st.center = circle_position(spec.script, st.angle);
            break;
        case Script::Kind::Patrol:
            st.patrol_arc = 0.0;
            st.center = patrol_position(spec.script, 0.0);
            break;
        default:
            st.center = spec.center0;
            break;
    }
    return st;
}

void region_plan_step(const RegionSpec& spec, RegionState& st, double dt, Rng& rng) {
    const Script& s = spec.script;
    switch (s.kind) {
        case Script::Kind::Static:
            st.velocity = {0.0, 0.0};
            return;
        case Script::Kind::Patrol: {
            Vec2 next = patrol_position(s, st.patrol_arc + s.speed * dt);
            st.velocity = (next - st.center) / dt;
            return;
        }
        case Script::Kind::Circle: {
            Vec2 next = circle_position(s, st.angle + s.angular_rate * dt);
            st.velocity = (next - st.center) / dt;
            return;
        }
        case Script::Kind::RandomWalk: {
            double heading = rng.uniform(0.0, 6.283185307179586476925286766559);
            double speed = rng.uniform(0.0, s.speed);
            Vec2 raw = st.center + Vec2{speed * std::cos(heading), speed * std::sin(heading)} * dt;
            Vec2 next{reflect_into(raw.x, s.bounds.lo.x, s.bounds.hi.x),
                      reflect_into(raw.y, s.bounds.lo.y, s.bounds.hi.y)};
            st.velocity = (next - st.center) / dt;
            return;
        }
    }
}

void region_apply_step(const RegionSpec& spec, RegionState& st, double dt) {
    const Script& s = spec.script;
    switch (s.kind) {
        case Script::Kind::Static:
            return;
        case Script::Kind::Patrol:
            st.patrol_arc += s.speed * dt;
            st.center = patrol_position(s, st.patrol_arc);
            return;
        case Script::Kind::Circle:
            st.angle += s.angular_rate * dt;
            st.center = circle_position(s, st.angle);
            return;
        case Script::Kind::RandomWalk:
            st.center += st.velocity * dt;
            return;
    }
}

}  // namespace stlshield::world
