#pragma once

#include <functional>
#include <memory>

#include "rl/episode.hpp"

namespace stlshield::rl {

struct TrainConfig {
    int iterations = 100;        // training episodes (Alg. 1 outer loop)
    double discount = 0.99;
    double actor_lr = 3e-4;
    double critic_lr = 3e-4;
    double entropy_alpha = 0.02;
    int batch_size = 64;
    int buffer_capacity = 100000;
    int hidden = 64;
    int updates_per_episode = 150;
    int warmup_transitions = 2000;  // no updates until the buffer holds this many
    double polyak = 0.005;
    std::uint64_t seed = 1;
};

struct CurvePoint {
    int episode = 0;
    double ret = 0.0;
    bool stl_satisfied = false;
    double eps_max = 0.0;
};

struct TrainResult {
    std::shared_ptr<ActorCriticPolicy> policy;
    std::vector<CurvePoint> curve;
    bool bound_ok = true;
};

// Alg. 1: per iteration, one shielded episode appending to the replay buffer,
// then gradient steps on sampled batches. Deterministic for a fixed seed.
TrainResult train(const TrainConfig& cfg, const world::WorldConfig& world_cfg,
                  const stl::FormulaPtr& spec, const stl::TaskSet& tasks,
                  const EpisodeOptions& episode_opts,
                  const std::function<void(const CurvePoint&)>& on_episode = nullptr);

}  // namespace stlshield::rl
