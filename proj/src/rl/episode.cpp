#include "rl/episode.hpp"

#include <algorithm>
#include <cmath>

namespace stlshield::rl {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kEpsSmall = 1e-6;

}  // namespace

EpisodeResult run_episode(const world::WorldConfig& world_cfg, Policy& policy,
                          const stl::FormulaPtr& spec, const stl::TaskSet& tasks,
                          const EpisodeOptions& opts, std::uint64_t seed, ReplayBuffer* buffer) {
    EpisodeResult result;
    result.seed = seed;

    const double dt = world_cfg.dt;
    const seq::Params& sp = opts.seq_params;
    Rng ep_rng(derive_seed(seed, 1));
    const std::uint64_t world_seed = derive_seed(seed, 0);

    world::World w(world_cfg, world_seed);
    auto unrolled = seq::unroll(tasks, world_cfg);

    Vec2 x0;
    if (opts.forced_x0) {
        x0 = *opts.forced_x0;
    } else {
        x0 = seq::sample_feasible_state(unrolled, w, sp, ep_rng);
    }
    w.reset(x0, world_seed);
    result.x0 = x0;

    auto maybe_seq = seq::generate_sequence(x0, 0.0, unrolled, w, sp);
    if (!maybe_seq) {
        throw Error(ErrorCode::Infeasible, "initial state admits no feasible sequence");
    }
    seq::SequenceState sequence = std::move(*maybe_seq);
    result.feasible_start = true;

    filter::BoundTracker tracker;
    tracker.gamma = sp.gamma;
    tracker.tol_disc =
        filter::BoundTracker::discretization_tolerance(world_cfg.u_max, world_cfg.d_max, dt);

    // Region tracks for the offline monitor.
    stl::Trajectory traj;
    traj.dt = dt;
    traj.samples.reserve(static_cast<std::size_t>(opts.steps) + 1);
    traj.samples.push_back(x0);
    std::vector<std::string> tracked = spec ? stl::referenced_regions(*spec) : std::vector<std::string>{};
    if (opts.track_all_regions) {
        for (const auto& reg : world_cfg.regions) {
            if (std::find(tracked.begin(), tracked.end(), reg.name) == tracked.end()) {
                tracked.push_back(reg.name);
            }
        }
    }
    std::vector<int> tracked_idx;
    for (const auto& name : tracked) {
        int idx = world_cfg.region_index(name);
        if (idx < 0) {
            throw Error(ErrorCode::Config, "specification references unknown region '" + name + "'");
        }
        tracked_idx.push_back(idx);
        auto& track = traj.regions[name];
        track.shape = world_cfg.regions[static_cast<std::size_t>(idx)].shape;
        track.centers.reserve(static_cast<std::size_t>(opts.steps) + 1);
        track.centers.push_back(w.region_state(idx).center);
    }

    if (opts.record_rows) result.rows.reserve(static_cast<std::size_t>(opts.steps) + 1);

    Observation obs = build_observation(w, sequence, 0.0, opts.obs_layout);
    double seg_eps_max = 0.0;  // slack max over the current barrier segment

    for (long step = 0; step < opts.steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        Vec2 u_rl = clamp_to_ball(policy.act(obs, ep_rng), world_cfg.u_max);

        Vec2 u_exec = u_rl;
        StepRow row;
        row.t = t;
        row.x = w.x();
        row.u_rl = u_rl;

        if (!sequence.empty()) {
            auto chain = seq::build_chain(sequence, w, t, sp);
            auto ev = cbf::evaluate(w.x(), chain, sp.cbf(), sequence.dwell_active);
            row.b_value = ev.value;
            row.has_constraint = true;
            row.critical_task = ev.critical_index;
            row.active_region = sequence.pending.front().region();
            row.db_dx = ev.db_dx;
            row.db_dt = ev.db_dt;
            if (opts.mode == Mode::Shielded) {
                double drift = ev.db_dt;
                for (std::size_t k = 0; k < chain.size(); ++k) {
                    drift += dot(ev.db_dcenter[k], w.region_state(chain[k].region_id).velocity);
                }
                filter::QpProblem qp;
                qp.a = ev.db_dx;
                qp.r = -(drift + sp.gamma * ev.enforced_value);
                qp.u_rl = u_rl;
                qp.u_max = world_cfg.u_max;
                qp.k_eps = opts.k_eps;
                filter::QpSolution sol = filter::solve_qp(qp);
                u_exec = filter::compose(u_rl, sol);
                row.u_cbf = sol.u_cbf;
                row.eps = sol.eps;
                if (sol.active_set == "cbf") row.qp_active_set = 1;
                else if (sol.active_set == "ball") row.qp_active_set = 2;
                else if (sol.active_set == "ball+cbf") row.qp_active_set = 3;
                else if (sol.active_set == "slack") row.qp_active_set = 4;
                else if (sol.active_set == "slack+ball") row.qp_active_set = 5;
                seg_eps_max = std::max(seg_eps_max, sol.eps);
                result.eps_max = std::max(result.eps_max, sol.eps);
                tracker.update(ev.value, sol.eps);
            }
        }

        w.step(u_exec);
        const double t1 = static_cast<double>(step + 1) * dt;
        double reward = w.reward();
        result.return_sum += reward;
        row.reward = reward;

        traj.samples.push_back(w.x());
        for (std::size_t k = 0; k < tracked.size(); ++k) {
            traj.regions[tracked[k]].centers.push_back(w.region_state(tracked_idx[k]).center);
        }

        // Hit processing (Alg. 1 lines 16-18) against the post-step state.
        if (!sequence.empty()) {
            seq::PlannedHit& front = sequence.pending.front();
            auto snap = seq::snapshot(w, front.region());
            bool inside = world::signed_distance(w.x(), snap.shape, snap.center) <= 0.0;
            bool released = t1 >= front.release - kTimeEps;
            bool hit = false;
            double entry_time = t1;
            if (front.dwell > 0.0) {
                if (inside && released) {
                    if (!sequence.dwell_active) {
                        sequence.dwell_active = true;
                        sequence.dwell_samples = 1;
                        sequence.dwell_samples_needed = seq::dwell_samples_needed(front.dwell, dt);
                        tracker.start_segment();
                        seg_eps_max = 0.0;
                    } else {
                        ++sequence.dwell_samples;
                    }
                    if (sequence.dwell_samples >= sequence.dwell_samples_needed) {
                        hit = true;
                        entry_time =
                            t1 - static_cast<double>(sequence.dwell_samples_needed - 1) * dt;
                    }
                } else if (sequence.dwell_active) {
                    // Dwell broke; back to the reach phase.
                    sequence.dwell_active = false;
                    sequence.dwell_samples = 0;
                    sequence.dwell_samples_needed = 0;
                    tracker.start_segment();
                    seg_eps_max = 0.0;
                }
            } else if (inside && released) {
                hit = true;
            }
            if (hit) {
                HitRecord rec;
                rec.obligation_id = front.obligation_id;
                rec.task_index = front.task_index;
                rec.entry_time = entry_time;
                rec.hit_time = t1;
                rec.deadline = front.deadline;
                rec.seg_eps_max = seg_eps_max;
                result.hits.push_back(rec);
                seq::on_hit(sequence, t1);
                tracker.start_segment();
                seg_eps_max = 0.0;
            }
            seq::maybe_swap_alternative(sequence, w, w.x(), t1, sp);
        }

        Observation next_obs = build_observation(w, sequence, t1, opts.obs_layout);
        if (buffer) {
            Transition tr;
            tr.obs = obs.flat;
            tr.next_obs = next_obs.flat;
            tr.action = u_exec;  // executed control, not the raw policy output
            tr.reward = reward;
            tr.done = (step + 1 == opts.steps);
            buffer->push(std::move(tr));
        }
        obs = std::move(next_obs);
        if (opts.record_rows) result.rows.push_back(row);
    }

    if (opts.record_rows) {
        StepRow final_row;
        final_row.t = static_cast<double>(opts.steps) * dt;
        final_row.x = w.x();
        result.rows.push_back(final_row);
    }

    // Remaining obligations missed by episode end.
    const double t_end = static_cast<double>(opts.steps) * dt;
    for (const auto& h : sequence.pending) {
        MissRecord miss;
        miss.obligation_id = h.obligation_id;
        miss.task_index = h.task_index;
        miss.deadline = h.deadline;
        miss.delay = std::max(0.0, (t_end + dt) - h.deadline);
        result.misses.push_back(miss);
    }

    result.eps_small = result.eps_max <= kEpsSmall;
    result.bound_ok = tracker.ok;
    result.bound_min_margin = tracker.min_margin;

    result.relaxation_ok = true;
    result.max_delay = 0.0;
    for (const auto& hit : result.hits) {
        double delay = std::max(0.0, hit.entry_time - hit.deadline);
        result.max_delay = std::max(result.max_delay, delay);
        if (delay > hit.seg_eps_max / sp.gamma + tracker.tol_disc) result.relaxation_ok = false;
    }
    for (const auto& miss : result.misses) {
        result.max_delay = std::max(result.max_delay, miss.delay);
        if (miss.delay > result.eps_max / sp.gamma + tracker.tol_disc) result.relaxation_ok = false;
    }

    if (opts.run_monitor && spec) {
        result.stl_satisfied = stl::satisfies(traj, *spec, 0.0);
        result.monitored = true;
    }
    if (opts.record_traj) result.traj = std::move(traj);
    return result;
}

}  // namespace stlshield::rl
