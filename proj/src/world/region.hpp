#pragma once

#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/vec.hpp"
#include "world/geometry.hpp"

namespace stlshield::world {

struct Aabb {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};
    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    Vec2 extent() const { return hi - lo; }
};

// Motion scripts for target regions. Every script respects the region's
// declared speed bound per step.
struct Script {
    enum class Kind { Static, Patrol, Circle, RandomWalk } kind = Kind::Static;
    // patrol: segment a->b traversed at `speed`, reflecting at endpoints
    Vec2 a{0.0, 0.0};
    Vec2 b{0.0, 0.0};
    double speed = 0.0;
    // circle: orbit of `orbit_radius` around `a` at `angular_rate` rad/time
    double orbit_radius = 0.0;
    double angular_rate = 0.0;
    double phase0 = 0.0;
    // random_walk: uniform heading, speed uniform in [0, speed], reflected at
    // `bounds`
    Aabb bounds;
};

struct RegionSpec {
    std::string name;
    Shape shape;
    Vec2 center0{0.0, 0.0};  // ignored for circle scripts (derived from phase)
    double speed_max = 0.0;
    Script script;
};

// Runtime state of one region. `velocity` is the displacement rate the region
// will realize over the upcoming step; it is drawn/derived before the step so
// the filter can use the true instantaneous target input.
struct RegionState {
    Vec2 center{0.0, 0.0};
    Vec2 velocity{0.0, 0.0};
    double patrol_arc = 0.0;
    double angle = 0.0;
};

RegionState region_reset(const RegionSpec& spec);

// Computes the upcoming-step velocity (may consume rng for random walks).
void region_plan_step(const RegionSpec& spec, RegionState& st, double dt, Rng& rng);

// Applies the planned velocity.
void region_apply_step(const RegionSpec& spec, RegionState& st, double dt);

}  // namespace stlshield::world
