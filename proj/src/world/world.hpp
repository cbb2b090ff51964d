#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "world/region.hpp"

namespace stlshield::world {

struct WorldConfig {
    Aabb arena{{0.0, 0.0}, {10.0, 10.0}};
    double dt = 0.1;
    double u_max = 1.0;
    double d_max = 0.2;
    RegionSpec goal;  // reward region; static by convention but any script works
    std::vector<RegionSpec> regions;

    void validate() const;
    int region_index(const std::string& name) const;
};

// Disturbed single integrator plus scripted regions. Value type; stepping is
// deterministic given the seed.
class World {
public:
    World(WorldConfig config, std::uint64_t seed);

    void reset(const Vec2& x0, std::uint64_t seed);

    // x <- x + (u + d) * dt with ||d|| <= d_max; regions advance one step.
    // Throws Error(Argument) when ||u|| exceeds u_max beyond tolerance.
    void step(const Vec2& u);

    double t() const { return static_cast<double>(step_count_) * cfg_.dt; }
    long step_count() const { return step_count_; }
    const Vec2& x() const { return x_; }
    const WorldConfig& config() const { return cfg_; }

    const RegionState& region_state(int idx) const { return regions_[static_cast<std::size_t>(idx)]; }
    const RegionSpec& region_spec(int idx) const { return cfg_.regions[static_cast<std::size_t>(idx)]; }
    int region_count() const { return static_cast<int>(regions_.size()); }

    const RegionState& goal_state() const { return goal_; }

    // 1 when the agent is inside the goal region, else 0.
    double reward() const;

    Rng& rng() { return rng_; }

private:
    WorldConfig cfg_;
    Vec2 x_{0.0, 0.0};
    long step_count_ = 0;
    std::vector<RegionState> regions_;
    RegionState goal_;
    Rng rng_;
};

}  // namespace stlshield::world
