#include "world/world.hpp"

#include <cmath>

namespace stlshield::world {

namespace {

double script_peak_speed(const RegionSpec& spec) {
    switch (spec.script.kind) {
        case Script::Kind::Static: return 0.0;
        case Script::Kind::Patrol: return spec.script.speed;
        case Script::Kind::Circle:
            return std::fabs(spec.script.angular_rate) * spec.script.orbit_radius;
        case Script::Kind::RandomWalk: return spec.script.speed;
    }
    return 0.0;
}

}  // namespace

void WorldConfig::validate() const {
    if (dt <= 0.0) throw Error(ErrorCode::Config, "world.dt must be positive");
    if (u_max <= 0.0) throw Error(ErrorCode::Config, "world.agent.u_max must be positive");
    if (d_max < 0.0) throw Error(ErrorCode::Config, "world.agent.d_max must be non-negative");
    if (d_max >= u_max) {
        throw Error(ErrorCode::Config, "world.agent.d_max must be below u_max");
    }
    if (arena.hi.x <= arena.lo.x || arena.hi.y <= arena.lo.y) {
        throw Error(ErrorCode::Config, "world.arena must have positive extent");
    }
    for (const auto& r : regions) {
        if (r.name.empty()) throw Error(ErrorCode::Config, "region name must be non-empty");
        if (r.shape.kind == ShapeKind::Disk && r.shape.radius < 0.0) {
            throw Error(ErrorCode::Config, "region '" + r.name + "' has negative radius");
        }
        if (script_peak_speed(r) > r.speed_max + 1e-9) {
            throw Error(ErrorCode::Config,
                        "region '" + r.name + "' script exceeds its declared speed bound");
        }
    }
}

int WorldConfig::region_index(const std::string& name) const {
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

World::World(WorldConfig config, std::uint64_t seed) : cfg_(std::move(config)), rng_(seed) {
    reset({0.0, 0.0}, seed);
}

void World::reset(const Vec2& x0, std::uint64_t seed) {
    rng_.reseed(seed);
    x_ = x0;
    step_count_ = 0;
    regions_.clear();
    regions_.reserve(cfg_.regions.size());
    for (const auto& spec : cfg_.regions) regions_.push_back(region_reset(spec));
    goal_ = region_reset(cfg_.goal);
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        region_plan_step(cfg_.regions[i], regions_[i], cfg_.dt, rng_);
    }
    region_plan_step(cfg_.goal, goal_, cfg_.dt, rng_);
}

void World::step(const Vec2& u) {
    if (norm(u) > cfg_.u_max + 1e-9) {
        throw Error(ErrorCode::Argument, "control input exceeds u_max");
    }
    Vec2 d = rng_.uniform_disk(cfg_.d_max);
    x_ += (u + d) * cfg_.dt;
    // The arena is the simulation environment: project back into the box.
    // Projection onto a convex set is non-expansive, so distances to interior
    // targets never grow versus the unclamped step.
    x_.x = std::min(std::max(x_.x, cfg_.arena.lo.x), cfg_.arena.hi.x);
    x_.y = std::min(std::max(x_.y, cfg_.arena.lo.y), cfg_.arena.hi.y);
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        region_apply_step(cfg_.regions[i], regions_[i], cfg_.dt);
    }
    region_apply_step(cfg_.goal, goal_, cfg_.dt);
    ++step_count_;
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        region_plan_step(cfg_.regions[i], regions_[i], cfg_.dt, rng_);
    }
    region_plan_step(cfg_.goal, goal_, cfg_.dt, rng_);
}

double World::reward() const {
    return signed_distance(x_, cfg_.goal.shape, goal_.center) <= 0.0 ? 1.0 : 0.0;
}

}  // namespace stlshield::world
