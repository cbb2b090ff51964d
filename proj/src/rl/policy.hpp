#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rl/net.hpp"
#include "seq/sequence.hpp"
#include "world/world.hpp"

namespace stlshield::rl {

// Fixed-width observation: agent position, goal offset, then per pending
// obligation (front first, up to `slots`) the chosen region's center offset
// and remaining time, zero-padded.
struct ObsLayout {
    int slots = 6;
    double pos_scale = 10.0;
    double time_scale = 300.0;

    int dim() const { return 4 + 3 * slots; }
};

struct Observation {
    Vec2 x;
    Vec2 goal_center;
    std::vector<double> flat;
};

Observation build_observation(const world::World& w, const seq::SequenceState& seq, double t,
                              const ObsLayout& layout);

class Policy {
public:
    virtual ~Policy() = default;
    // Control in the u_max ball.
    virtual Vec2 act(const Observation& obs, Rng& rng) = 0;
    virtual std::string name() const = 0;
};

// Non-owning-friendly adapter so shared policies fit unique_ptr<Policy> APIs.
class PolicyHandle : public Policy {
public:
    explicit PolicyHandle(std::shared_ptr<Policy> inner) : inner_(std::move(inner)) {}
    Vec2 act(const Observation& obs, Rng& rng) override { return inner_->act(obs, rng); }
    std::string name() const override { return inner_->name(); }

private:
    std::shared_ptr<Policy> inner_;
};

class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(double u_max) : u_max_(u_max) {}
    Vec2 act(const Observation&, Rng& rng) override { return rng.uniform_disk(u_max_); }
    std::string name() const override { return "random"; }

private:
    double u_max_;
};

// Full speed toward the goal center.
class GreedyPolicy : public Policy {
public:
    explicit GreedyPolicy(double u_max) : u_max_(u_max) {}
    Vec2 act(const Observation& obs, Rng&) override {
        return unit_or_zero(obs.goal_center - obs.x) * u_max_;
    }
    std::string name() const override { return "greedy"; }

private:
    double u_max_;
};

struct Transition {
    std::vector<double> obs;
    std::vector<double> next_obs;
    Vec2 action;  // the executed control
    double reward = 0.0;
    bool done = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}
    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    const Transition& at(std::size_t i) const { return data_[i]; }
    std::vector<const Transition*> sample(std::size_t n, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

struct ActorCriticConfig {
    int obs_dim = 22;
    int hidden = 64;
    double u_max = 1.0;
    double actor_lr = 3e-4;
    double critic_lr = 3e-4;
    double entropy_alpha = 0.02;
    double discount = 0.99;
    double polyak = 0.005;
    double init_log_std = 0.0;
};

struct UpdateStats {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
};

// Stochastic Gaussian actor with a learned state-independent log-std and a
// Q(s,a) critic with a Polyak-averaged target. Actions are squashed to the
// u_max ball by radial clamping.
class ActorCriticPolicy : public Policy {
public:
    ActorCriticPolicy(const ActorCriticConfig& cfg, std::uint64_t init_seed);

    Vec2 act(const Observation& obs, Rng& rng) override;
    std::string name() const override { return "trained"; }

    void set_deterministic(bool v) { deterministic_ = v; }

    // One gradient step on the critic (TD target) and the actor
    // (entropy-regularized objective). Throws Error(Runtime) when parameters
    // stop being finite.
    UpdateStats update(const std::vector<const Transition*>& batch, Rng& rng);

    // Loss + parameter gradients with frozen exploration noise; used by the
    // finite-difference gradient checks. `noise` holds one 2-vector per batch
    // element (next-state noise for the critic, current-state for the actor).
    double critic_loss_grad(const std::vector<const Transition*>& batch,
                            const std::vector<Vec2>& noise, std::vector<double>* grad) const;
    double actor_loss_grad(const std::vector<const Transition*>& batch,
                           const std::vector<Vec2>& noise, std::vector<double>* actor_grad,
                           std::vector<double>* log_std_grad) const;

    void save(const std::string& path) const;
    static std::unique_ptr<ActorCriticPolicy> load(const std::string& path);

    const ActorCriticConfig& config() const { return cfg_; }
    Mlp& actor() { return actor_; }
    Mlp& critic() { return critic_; }
    std::vector<double>& log_std() { return log_std_; }

    Vec2 mean_action(const Observation& obs) const;
    double q_value(const std::vector<double>& obs, const Vec2& action) const;

private:
    Vec2 squash(const Vec2& a) const { return clamp_to_ball(a, cfg_.u_max); }

    ActorCriticConfig cfg_;
    Mlp actor_;
    Mlp critic_;
    Mlp critic_target_;
    std::vector<double> log_std_;
    Adam actor_opt_;
    Adam critic_opt_;
    Adam log_std_opt_;
    bool deterministic_ = false;
};

}  // namespace stlshield::rl
