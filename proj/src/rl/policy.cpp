#include "rl/policy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "core/error.hpp"

namespace stlshield::rl {

Observation build_observation(const world::World& w, const seq::SequenceState& seq, double t,
                              const ObsLayout& layout) {
    Observation obs;
    obs.x = w.x();
    obs.goal_center = w.goal_state().center;
    obs.flat.reserve(static_cast<std::size_t>(layout.dim()));
    obs.flat.push_back(obs.x.x / layout.pos_scale);
    obs.flat.push_back(obs.x.y / layout.pos_scale);
    obs.flat.push_back((obs.goal_center.x - obs.x.x) / layout.pos_scale);
    obs.flat.push_back((obs.goal_center.y - obs.x.y) / layout.pos_scale);
    for (int s = 0; s < layout.slots; ++s) {
        if (s < static_cast<int>(seq.pending.size())) {
            const auto& hit = seq.pending[static_cast<std::size_t>(s)];
            Vec2 c = w.region_state(hit.region()).center;
            obs.flat.push_back((c.x - obs.x.x) / layout.pos_scale);
            obs.flat.push_back((c.y - obs.x.y) / layout.pos_scale);
            obs.flat.push_back((hit.deadline - t) / layout.time_scale);
        } else {
            obs.flat.push_back(0.0);
            obs.flat.push_back(0.0);
            obs.flat.push_back(0.0);
        }
    }
    return obs;
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_ % capacity_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    std::vector<const Transition*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(&data_[static_cast<std::size_t>(rng.uniform_index(data_.size()))]);
    }
    return out;
}

ActorCriticPolicy::ActorCriticPolicy(const ActorCriticConfig& cfg, std::uint64_t init_seed)
    : cfg_(cfg) {
    Rng rng(init_seed);
    actor_ = Mlp({cfg.obs_dim, cfg.hidden, cfg.hidden, 2}, rng);
    critic_ = Mlp({cfg.obs_dim + 2, cfg.hidden, cfg.hidden, 1}, rng);
    critic_target_ = critic_;
    log_std_ = {cfg.init_log_std, cfg.init_log_std};
    actor_opt_ = Adam(actor_.param_count(), cfg.actor_lr);
    critic_opt_ = Adam(critic_.param_count(), cfg.critic_lr);
    log_std_opt_ = Adam(2, cfg.actor_lr);
}

Vec2 ActorCriticPolicy::mean_action(const Observation& obs) const {
    Mlp::Workspace ws;
    actor_.forward(obs.flat.data(), ws);
    const auto& out = actor_.output(ws);
    return squash({out[0], out[1]});
}

double ActorCriticPolicy::q_value(const std::vector<double>& obs, const Vec2& action) const {
    std::vector<double> in(obs);
    in.push_back(action.x);
    in.push_back(action.y);
    Mlp::Workspace ws;
    critic_.forward(in.data(), ws);
    return critic_.output(ws)[0];
}

Vec2 ActorCriticPolicy::act(const Observation& obs, Rng& rng) {
    Mlp::Workspace ws;
    actor_.forward(obs.flat.data(), ws);
    const auto& out = actor_.output(ws);
    Vec2 a{out[0], out[1]};
    if (!deterministic_) {
        a.x += std::exp(log_std_[0]) * rng.normal();
        a.y += std::exp(log_std_[1]) * rng.normal();
    }
    return squash(a);
}

namespace {

// Jacobian-transpose product of the radial clamp: d = (du)^T g.
Vec2 clamp_backward(const Vec2& pre, double u_max, const Vec2& g) {
    double n = norm(pre);
    if (n <= u_max || n == 0.0) return g;
    Vec2 dir = pre / n;
    double scale = u_max / n;
    // J = scale * (I - dir dir^T)
    double gd = dot(g, dir);
    return (g - dir * gd) * scale;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

double ActorCriticPolicy::critic_loss_grad(const std::vector<const Transition*>& batch,
                                           const std::vector<Vec2>& noise,
                                           std::vector<double>* grad) const {
    double loss = 0.0;
    double inv_n = 1.0 / static_cast<double>(batch.size());
    Mlp::Workspace ws_actor, ws_q, ws_tq;
    std::vector<double> in;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const Transition& tr = *batch[k];
        // TD target from the target critic at the next state's sampled action.
        double y = tr.reward;
        if (!tr.done) {
            actor_.forward(tr.next_obs.data(), ws_actor);
            const auto& mu = actor_.output(ws_actor);
            Vec2 a{mu[0] + std::exp(log_std_[0]) * noise[k].x,
                   mu[1] + std::exp(log_std_[1]) * noise[k].y};
            a = squash(a);
            in = tr.next_obs;
            in.push_back(a.x);
            in.push_back(a.y);
            critic_target_.forward(in.data(), ws_tq);
            y += cfg_.discount * critic_target_.output(ws_tq)[0];
        }
        in = tr.obs;
        in.push_back(tr.action.x);
        in.push_back(tr.action.y);
        critic_.forward(in.data(), ws_q);
        double q = critic_.output(ws_q)[0];
        double err = q - y;
        loss += 0.5 * err * err * inv_n;
        if (grad) {
            double dq = err * inv_n;
            critic_.backward(ws_q, &dq, *grad, nullptr);
        }
    }
    return loss;
}

double ActorCriticPolicy::actor_loss_grad(const std::vector<const Transition*>& batch,
                                          const std::vector<Vec2>& noise,
                                          std::vector<double>* actor_grad,
                                          std::vector<double>* log_std_grad) const {
    double loss = 0.0;
    double inv_n = 1.0 / static_cast<double>(batch.size());
    double sigma0 = std::exp(log_std_[0]);
    double sigma1 = std::exp(log_std_[1]);
    Mlp::Workspace ws_actor, ws_q;
    std::vector<double> in;
    std::vector<double> critic_scratch(critic_.param_count(), 0.0);
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const Transition& tr = *batch[k];
        actor_.forward(tr.obs.data(), ws_actor);
        const auto& mu = actor_.output(ws_actor);
        Vec2 pre{mu[0] + sigma0 * noise[k].x, mu[1] + sigma1 * noise[k].y};
        Vec2 u = squash(pre);
        in = tr.obs;
        in.push_back(u.x);
        in.push_back(u.y);
        critic_.forward(in.data(), ws_q);
        double q = critic_.output(ws_q)[0];

        // log pi of the reparameterized sample reduces to -sum(log sigma) + const.
        double log_pi = -(log_std_[0] + log_std_[1]) - 0.5 * (noise[k].x * noise[k].x +
                                                              noise[k].y * noise[k].y) -
                        std::log(2.0 * 3.14159265358979323846);
        loss += (cfg_.entropy_alpha * log_pi - q) * inv_n;

        if (actor_grad) {
            // dL/du = -dQ/du; pull the critic's input gradient back through
            // the clamp, then through the sampling map.
            double dq_out = 1.0;
            std::vector<double> dq_in;
            std::fill(critic_scratch.begin(), critic_scratch.end(), 0.0);
            critic_.backward(ws_q, &dq_out, critic_scratch, &dq_in);
            Vec2 dq_du{dq_in[static_cast<std::size_t>(cfg_.obs_dim)],
                       dq_in[static_cast<std::size_t>(cfg_.obs_dim) + 1]};
            Vec2 dL_dpre = clamp_backward(pre, cfg_.u_max, dq_du * (-inv_n));
            double dmu[2] = {dL_dpre.x, dL_dpre.y};
            actor_.backward(ws_actor, dmu, *actor_grad, nullptr);
            if (log_std_grad) {
                (*log_std_grad)[0] += cfg_.entropy_alpha * (-1.0) * inv_n +
                                      dL_dpre.x * sigma0 * noise[k].x;
                (*log_std_grad)[1] += cfg_.entropy_alpha * (-1.0) * inv_n +
                                      dL_dpre.y * sigma1 * noise[k].y;
            }
        }
    }
    return loss;
}

UpdateStats ActorCriticPolicy::update(const std::vector<const Transition*>& batch, Rng& rng) {
    std::vector<Vec2> critic_noise(batch.size());
    std::vector<Vec2> actor_noise(batch.size());
    for (auto& v : critic_noise) v = {rng.normal(), rng.normal()};
    for (auto& v : actor_noise) v = {rng.normal(), rng.normal()};

    UpdateStats stats;
    std::vector<double> cgrad(critic_.param_count(), 0.0);
    stats.critic_loss = critic_loss_grad(batch, critic_noise, &cgrad);
    critic_opt_.step(critic_.params, cgrad);

    std::vector<double> agrad(actor_.param_count(), 0.0);
    std::vector<double> lsgrad(2, 0.0);
    stats.actor_loss = actor_loss_grad(batch, actor_noise, &agrad, &lsgrad);
    actor_opt_.step(actor_.params, agrad);
    log_std_opt_.step(log_std_, lsgrad);
    for (double& ls : log_std_) ls = std::min(std::max(ls, -2.0), 1.5);

    for (std::size_t i = 0; i < critic_.params.size(); ++i) {
        critic_target_.params[i] =
            cfg_.polyak * critic_.params[i] + (1.0 - cfg_.polyak) * critic_target_.params[i];
    }

    if (!std::isfinite(stats.critic_loss) || !std::isfinite(stats.actor_loss) ||
        !all_finite(actor_.params) || !all_finite(critic_.params)) {
        throw Error(ErrorCode::Runtime, "policy update diverged (non-finite parameters)");
    }
    return stats;
}

void ActorCriticPolicy::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write checkpoint '" + path + "'");
    out << "stlshield-policy v1\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << "\n";
    };
    out << cfg_.obs_dim << " " << cfg_.hidden << " ";
    put(cfg_.u_max);
    out << "actor " << actor_.params.size() << "\n";
    for (double v : actor_.params) put(v);
    out << "log_std 2\n";
    put(log_std_[0]);
    put(log_std_[1]);
    out << "critic " << critic_.params.size() << "\n";
    for (double v : critic_.params) put(v);
    if (!out) throw Error(ErrorCode::Io, "failed writing checkpoint '" + path + "'");
}

std::unique_ptr<ActorCriticPolicy> ActorCriticPolicy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read checkpoint '" + path + "'");
    std::string header, v;
    std::getline(in, header);
    if (header != "stlshield-policy v1") {
        throw Error(ErrorCode::Io, "unrecognized checkpoint header in '" + path + "'");
    }
    ActorCriticConfig cfg;
    in >> cfg.obs_dim >> cfg.hidden >> cfg.u_max;
    auto policy = std::make_unique<ActorCriticPolicy>(cfg, 0);
    std::string tag;
    std::size_t n;
    in >> tag >> n;
    if (tag != "actor" || n != policy->actor_.params.size()) {
        throw Error(ErrorCode::Io, "checkpoint actor size mismatch");
    }
    for (auto& p : policy->actor_.params) in >> p;
    in >> tag >> n;
    if (tag != "log_std" || n != 2) throw Error(ErrorCode::Io, "checkpoint log_std mismatch");
    in >> policy->log_std_[0] >> policy->log_std_[1];
    in >> tag >> n;
    if (tag != "critic" || n != policy->critic_.params.size()) {
        throw Error(ErrorCode::Io, "checkpoint critic size mismatch");
    }
    for (auto& p : policy->critic_.params) in >> p;
    policy->critic_target_ = policy->critic_;
    if (!in) throw Error(ErrorCode::Io, "truncated checkpoint '" + path + "'");
    return policy;
}

}  // namespace stlshield::rl
