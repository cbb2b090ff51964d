#include "rl/train.hpp"

#include <cmath>

namespace stlshield::rl {

TrainResult train(const TrainConfig& cfg, const world::WorldConfig& world_cfg,
                  const stl::FormulaPtr& spec, const stl::TaskSet& tasks,
                  const EpisodeOptions& episode_opts,
                  const std::function<void(const CurvePoint&)>& on_episode) {
    ActorCriticConfig ac;
    ac.obs_dim = episode_opts.obs_layout.dim();
    ac.hidden = cfg.hidden;
    ac.u_max = world_cfg.u_max;
    ac.actor_lr = cfg.actor_lr;
    ac.critic_lr = cfg.critic_lr;
    ac.entropy_alpha = cfg.entropy_alpha;
    ac.discount = cfg.discount;
    ac.polyak = cfg.polyak;

    TrainResult result;
    result.policy = std::make_shared<ActorCriticPolicy>(ac, derive_seed(cfg.seed, 0xac));
    ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
    Rng update_rng(derive_seed(cfg.seed, 0x0b));
    RandomPolicy warmup_policy(world_cfg.u_max);

    for (int episode = 0; episode < cfg.iterations; ++episode) {
        EpisodeOptions opts = episode_opts;
        opts.record_rows = false;
        opts.record_traj = false;
        // Uniform exploration until the buffer holds the warmup transitions;
        // updates below stay off-policy either way.
        bool warming = buffer.size() < static_cast<std::size_t>(cfg.warmup_transitions);
        Policy& actor = warming ? static_cast<Policy&>(warmup_policy)
                                : static_cast<Policy&>(*result.policy);
        EpisodeResult ep = run_episode(world_cfg, actor, spec, tasks, opts,
                                       derive_seed(cfg.seed, static_cast<std::uint64_t>(episode)),
                                       &buffer);
        if (!std::isfinite(ep.return_sum)) {
            throw Error(ErrorCode::Runtime, "training diverged: non-finite episode return");
        }
        result.bound_ok = result.bound_ok && ep.bound_ok;

        if (buffer.size() >= static_cast<std::size_t>(
                                 std::max(cfg.batch_size, cfg.warmup_transitions))) {
            for (int u = 0; u < cfg.updates_per_episode; ++u) {
                auto batch = buffer.sample(static_cast<std::size_t>(cfg.batch_size), update_rng);
                result.policy->update(batch, update_rng);
            }
        }

        CurvePoint point;
        point.episode = episode;
        point.ret = ep.return_sum;
        point.stl_satisfied = ep.stl_satisfied;
        point.eps_max = ep.eps_max;
        result.curve.push_back(point);
        if (on_episode) on_episode(point);
    }
    return result;
}

}  // namespace stlshield::rl
