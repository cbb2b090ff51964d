#include "exp/config.hpp"

#include <cmath>
#include <fstream>

#include "core/error.hpp"

namespace stlshield::exp {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& why) {
    throw Error(ErrorCode::Config, "config error at '" + path + "': " + why);
}

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) config_fail(path_, "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    Reader child(const char* key) const {
        require(key);
        return Reader(j_.at(key), path_ + "." + key);
    }

    const json& raw(const char* key) const {
        require(key);
        return j_.at(key);
    }

    double number(const char* key) const {
        require(key);
        if (!j_.at(key).is_number()) config_fail(path_ + "." + key, "expected a number");
        return j_.at(key).get<double>();
    }
    double number(const char* key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    long integer(const char* key, long fallback) const {
        if (!has(key)) return fallback;
        if (!j_.at(key).is_number_integer()) config_fail(path_ + "." + key, "expected an integer");
        return j_.at(key).get<long>();
    }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!j_.at(key).is_boolean()) config_fail(path_ + "." + key, "expected a boolean");
        return j_.at(key).get<bool>();
    }

    std::string text(const char* key) const {
        require(key);
        if (!j_.at(key).is_string()) config_fail(path_ + "." + key, "expected a string");
        return j_.at(key).get<std::string>();
    }
    std::string text(const char* key, const std::string& fallback) const {
        return has(key) ? text(key) : fallback;
    }

    Vec2 vec2(const char* key) const {
        require(key);
        const json& v = j_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            config_fail(path_ + "." + key, "expected [x, y]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }
    Vec2 vec2(const char* key, Vec2 fallback) const { return has(key) ? vec2(key) : fallback; }

    const std::string& path() const { return path_; }
    const json& get() const { return j_; }

private:
    void require(const char* key) const {
        if (!j_.contains(key)) config_fail(path_ + "." + key, "missing required field");
    }
    const json& j_;
    std::string path_;
};

world::Shape parse_shape(const Reader& r) {
    std::string kind = r.text("shape", "disk");
    if (kind == "disk") {
        double radius = r.number("radius");
        if (radius <= 0.0) config_fail(r.path() + ".radius", "must be positive");
        return world::Shape::disk(radius);
    }
    if (kind == "rect") {
        Vec2 half = r.vec2("half_extents");
        if (half.x <= 0.0 || half.y <= 0.0) {
            config_fail(r.path() + ".half_extents", "must be positive");
        }
        return world::Shape::rect(half);
    }
    config_fail(r.path() + ".shape", "expected \"disk\" or \"rect\"");
}

world::Script parse_script(const Reader& region, double speed_max, const world::Aabb& arena) {
    world::Script s;
    if (!region.has("script")) {
        s.kind = world::Script::Kind::Static;
        return s;
    }
    Reader r = region.child("script");
    std::string kind = r.text("type");
    if (kind == "static") {
        s.kind = world::Script::Kind::Static;
        return s;
    }
    if (kind == "patrol") {
        s.kind = world::Script::Kind::Patrol;
        s.a = r.vec2("a");
        s.b = r.vec2("b");
        s.speed = r.number("speed", speed_max);
        return s;
    }
    if (kind == "circle") {
        s.kind = world::Script::Kind::Circle;
        s.a = r.vec2("center");
        s.orbit_radius = r.number("radius");
        s.angular_rate = r.number("angular_rate");
        s.phase0 = r.number("phase", 0.0);
        return s;
    }
    if (kind == "random_walk") {
        s.kind = world::Script::Kind::RandomWalk;
        s.speed = r.number("speed", speed_max);
        s.bounds = arena;
        if (r.has("bounds")) {
            Reader b = r.child("bounds");
            s.bounds.lo = b.vec2("min");
            s.bounds.hi = b.vec2("max");
        }
        return s;
    }
    config_fail(r.path() + ".type", "expected static|patrol|circle|random_walk");
}

world::RegionSpec parse_region(const Reader& r, const world::Aabb& arena) {
    world::RegionSpec spec;
    spec.name = r.text("name");
    spec.shape = parse_shape(r);
    spec.speed_max = r.number("speed_max", 0.0);
    if (spec.speed_max < 0.0) config_fail(r.path() + ".speed_max", "must be non-negative");
    spec.script = parse_script(r, spec.speed_max, arena);
    spec.center0 = r.vec2("center", spec.script.kind == world::Script::Kind::Patrol
                                        ? spec.script.a
                                        : Vec2{0.0, 0.0});
    return spec;
}

}  // namespace

world::WorldConfig parse_world(const json& j, const std::string& path_prefix) {
    Reader r(j, path_prefix);
    world::WorldConfig cfg;
    if (r.has("arena")) {
        Reader arena = r.child("arena");
        cfg.arena.lo = arena.vec2("min");
        cfg.arena.hi = arena.vec2("max");
    }
    cfg.dt = r.number("dt", 0.1);
    if (r.has("agent")) {
        Reader agent = r.child("agent");
        cfg.u_max = agent.number("u_max", 1.0);
        cfg.d_max = agent.number("d_max", 0.0);
    }
    if (r.has("goal")) {
        Reader goal = r.child("goal");
        cfg.goal = parse_region(goal, cfg.arena);
        if (cfg.goal.name.empty()) cfg.goal.name = "goal";
    } else {
        cfg.goal.name = "goal";
        cfg.goal.shape = world::Shape::disk(1.0);
        cfg.goal.center0 = (cfg.arena.lo + cfg.arena.hi) * 0.5;
    }
    if (r.has("regions")) {
        const json& regions = r.raw("regions");
        if (!regions.is_array()) config_fail(path_prefix + ".regions", "expected an array");
        int i = 0;
        for (const auto& rj : regions) {
            Reader rr(rj, path_prefix + ".regions[" + std::to_string(i++) + "]");
            cfg.regions.push_back(parse_region(rr, cfg.arena));
        }
    }
    cfg.validate();
    for (const auto& reg : cfg.regions) {
        if (reg.name == cfg.goal.name) {
            config_fail(path_prefix + ".regions", "region name collides with the goal region '" +
                                                      reg.name + "'");
        }
    }
    return cfg;
}

seq::Params ExperimentConfig::seq_params() const {
    seq::Params p;
    p.u_max = world.u_max;
    p.d_max = world.d_max;
    p.gamma = shield.gamma;
    p.dt = world.dt;
    p.feasibility_margin = shield.feasibility_margin;
    p.deadline_margin = shield.deadline_margin;
    p.dwell_margin_time = shield.dwell_margin_steps * world.dt;
    p.sample_budget = shield.sample_budget;
    return p;
}

rl::ObsLayout ExperimentConfig::obs_layout() const {
    rl::ObsLayout layout;
    layout.slots = 6;
    Vec2 ext = world.arena.extent();
    layout.pos_scale = std::max(ext.x, ext.y);
    layout.time_scale = std::max(horizon, 1.0);
    return layout;
}

rl::EpisodeOptions ExperimentConfig::episode_options() const {
    rl::EpisodeOptions opts;
    opts.steps = episode_steps();
    opts.mode = (eval.mode == "unshielded") ? rl::Mode::Unshielded : rl::Mode::Shielded;
    opts.seq_params = seq_params();
    opts.k_eps = shield.k_eps;
    opts.obs_layout = obs_layout();
    return opts;
}

ExperimentConfig parse_config(const json& j) {
    Reader r(j, "$");
    ExperimentConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 1));
    cfg.world = parse_world(r.raw("world"), "world");
    cfg.spec_text = r.text("spec", "");
    cfg.spec = stl::parse(cfg.spec_text);
    cfg.tasks = stl::normalize_tasks(*cfg.spec);

    if (r.has("shield")) {
        Reader s = r.child("shield");
        cfg.shield.gamma = s.number("gamma", 1.0);
        cfg.shield.k_eps = s.number("k_eps", 1e4);
        cfg.shield.feasibility_margin = s.number("feasibility_margin", 0.0);
        cfg.shield.deadline_margin = s.number("deadline_margin", 0.0);
        cfg.shield.dwell_margin_steps = s.number("dwell_margin_steps", 1.0);
        cfg.shield.sample_budget = static_cast<int>(s.integer("sample_budget", 10000));
        if (cfg.shield.gamma <= 0.0) config_fail("shield.gamma", "must be positive");
        if (cfg.shield.k_eps <= 0.0) config_fail("shield.k_eps", "must be positive");
    }

    cfg.horizon = r.number("horizon", 300.0);
    if (r.has("train")) {
        Reader t = r.child("train");
        cfg.do_train = true;
        cfg.train.iterations = static_cast<int>(t.integer("iterations", 100));
        cfg.train.discount = t.number("discount", 0.99);
        cfg.train.actor_lr = t.number("actor_lr", 3e-4);
        cfg.train.critic_lr = t.number("critic_lr", 3e-4);
        cfg.train.entropy_alpha = t.number("entropy_alpha", 0.02);
        cfg.train.batch_size = static_cast<int>(t.integer("batch_size", 64));
        cfg.train.buffer_capacity = static_cast<int>(t.integer("buffer_capacity", 100000));
        cfg.train.hidden = static_cast<int>(t.integer("hidden", 64));
        cfg.train.updates_per_episode = static_cast<int>(t.integer("updates_per_episode", 150));
        cfg.train.warmup_transitions = static_cast<int>(t.integer("warmup_transitions", 2000));
        cfg.train.polyak = t.number("polyak", 0.005);
        cfg.train.seed = static_cast<std::uint64_t>(t.integer("seed", static_cast<long>(cfg.seed)));
        if (cfg.train.discount <= 0.0 || cfg.train.discount > 1.0) {
            config_fail("train.discount", "must be in (0, 1]");
        }
    }
    cfg.checkpoint = r.text("checkpoint", "");

    if (r.has("eval")) {
        Reader e = r.child("eval");
        cfg.eval.episodes = static_cast<int>(e.integer("episodes", 100));
        cfg.eval.mode = e.text("mode", "shielded");
        cfg.eval.policy = e.text("policy", "random");
        cfg.eval.workers = static_cast<int>(e.integer("workers", 0));
        cfg.eval.save_logs = static_cast<int>(e.integer("save_logs", 2));
        cfg.eval.assert_satisfaction_min = e.number("assert_satisfaction_min", -1.0);
        cfg.eval.assert_bound = e.boolean("assert_bound", false);
        if (cfg.eval.mode != "shielded" && cfg.eval.mode != "unshielded") {
            config_fail("eval.mode", "expected \"shielded\" or \"unshielded\"");
        }
        if (cfg.eval.policy != "random" && cfg.eval.policy != "greedy" &&
            cfg.eval.policy != "trained") {
            config_fail("eval.policy", "expected \"random\", \"greedy\" or \"trained\"");
        }
    }

    if (r.has("output")) {
        Reader o = r.child("output");
        cfg.output.dir = o.text("dir", "out");
        cfg.output.plots = o.boolean("plots", true);
    }

    // Cross-field invariants.
    double hrz = stl::horizon(*cfg.spec);
    if (hrz > cfg.horizon + 1e-9) {
        config_fail("horizon", "episode horizon " + stl::format_number(cfg.horizon) +
                                   " is below the specification horizon " +
                                   stl::format_number(hrz));
    }
    for (const auto& name : stl::referenced_regions(*cfg.spec)) {
        if (cfg.world.region_index(name) < 0) {
            config_fail("spec", "references region '" + name + "' not present in world.regions");
        }
    }
    return cfg;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, "config '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    return parse_config(load_json_file(path));
}

void apply_override(json& j, const std::string& dot_key, const std::string& value) {
    if (dot_key.empty()) throw Error(ErrorCode::Argument, "empty override key");
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        std::size_t dotpos = dot_key.find('.', start);
        std::string part = dot_key.substr(start, dotpos - start);
        if (part.empty()) throw Error(ErrorCode::Argument, "bad override key '" + dot_key + "'");
        if (dotpos == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[part];
        start = dotpos + 1;
    }
}

}  // namespace stlshield::exp
