#include "exp/runner.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "exp/plot.hpp"
#include "io/csv.hpp"
#include "rl/train.hpp"

namespace stlshield::exp {

namespace fs = std::filesystem;
using nlohmann::json;

json EvalReport::to_json() const {
    json j;
    j["episodes"] = episodes;
    j["mode"] = mode;
    j["policy"] = policy;
    j["satisfaction_rate"] = satisfaction_rate;
    j["relaxation"] = {{"mean", relaxation_mean}, {"max", relaxation_max}};
    j["mean_return"] = mean_return;
    j["eps"] = {{"max", eps_max},
                {"mean_episode_max", eps_mean_episode_max},
                {"episodes_with_slack", episodes_with_slack}};
    j["bound_check"] = {{"pass", bound_pass}, {"min_margin", bound_min_margin}};
    j["hard_link_ok"] = hard_link_ok;
    j["relaxation_ok"] = relaxation_ok;
    return j;
}

EvalReport evaluate(const ExperimentConfig& cfg, rl::Policy& policy, int episodes, rl::Mode mode,
                    int workers, int keep_logs, std::vector<rl::EpisodeResult>* kept) {
    std::vector<rl::EpisodeResult> results(static_cast<std::size_t>(episodes));
    rl::EpisodeOptions base = cfg.episode_options();
    base.mode = mode;

    int pool = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    pool = std::max(1, std::min(pool, episodes));

    std::uint64_t eval_master = derive_seed(cfg.seed, 0xeba1);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= episodes) return;
            try {
                rl::EpisodeOptions opts = base;
                if (i < keep_logs) {
                    opts.record_rows = true;
                    opts.record_traj = true;
                    opts.track_all_regions = true;
                }
                results[static_cast<std::size_t>(i)] =
                    rl::run_episode(cfg.world, policy, cfg.spec, cfg.tasks, opts,
                                    derive_seed(eval_master, static_cast<std::uint64_t>(i)));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (pool == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int k = 0; k < pool; ++k) threads.emplace_back(work);
        for (auto& th : threads) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    EvalReport rep;
    rep.episodes = episodes;
    rep.mode = (mode == rl::Mode::Shielded) ? "shielded" : "unshielded";
    rep.policy = policy.name();
    rep.bound_min_margin = std::numeric_limits<double>::infinity();
    int satisfied = 0;
    double relax_sum = 0.0;
    double ret_sum = 0.0;
    double eps_ep_sum = 0.0;
    for (const auto& ep : results) {
        satisfied += ep.stl_satisfied ? 1 : 0;
        relax_sum += ep.max_delay;
        rep.relaxation_max = std::max(rep.relaxation_max, ep.max_delay);
        ret_sum += ep.return_sum;
        rep.eps_max = std::max(rep.eps_max, ep.eps_max);
        eps_ep_sum += ep.eps_max;
        rep.episodes_with_slack += ep.eps_small ? 0 : 1;
        rep.bound_pass = rep.bound_pass && ep.bound_ok;
        rep.bound_min_margin = std::min(rep.bound_min_margin, ep.bound_min_margin);
        if (mode == rl::Mode::Shielded && ep.eps_small && !ep.stl_satisfied) {
            rep.hard_link_ok = false;
        }
        if (mode == rl::Mode::Shielded && !ep.relaxation_ok) rep.relaxation_ok = false;
    }
    rep.satisfaction_rate = episodes ? static_cast<double>(satisfied) / episodes : 1.0;
    rep.relaxation_mean = episodes ? relax_sum / episodes : 0.0;
    rep.mean_return = episodes ? ret_sum / episodes : 0.0;
    rep.eps_mean_episode_max = episodes ? eps_ep_sum / episodes : 0.0;
    if (!std::isfinite(rep.bound_min_margin)) rep.bound_min_margin = 0.0;

    if (kept) {
        kept->clear();
        for (int i = 0; i < std::min(keep_logs, episodes); ++i) {
            kept->push_back(std::move(results[static_cast<std::size_t>(i)]));
        }
    }
    return rep;
}

std::unique_ptr<rl::Policy> make_policy(const ExperimentConfig& cfg,
                                        std::vector<rl::CurvePoint>* curve) {
    if (cfg.eval.policy == "random") {
        return std::make_unique<rl::RandomPolicy>(cfg.world.u_max);
    }
    if (cfg.eval.policy == "greedy") {
        return std::make_unique<rl::GreedyPolicy>(cfg.world.u_max);
    }
    // trained
    if (!cfg.checkpoint.empty() && fs::exists(cfg.checkpoint) && !cfg.do_train) {
        auto policy = rl::ActorCriticPolicy::load(cfg.checkpoint);
        policy->set_deterministic(true);
        return policy;
    }
    if (!cfg.do_train) {
        throw Error(ErrorCode::Config,
                    "eval.policy is \"trained\" but no train block or checkpoint is configured");
    }
    rl::TrainResult tr = rl::train(cfg.train, cfg.world, cfg.spec, cfg.tasks,
                                   cfg.episode_options());
    if (curve) *curve = tr.curve;
    if (!cfg.checkpoint.empty()) tr.policy->save(cfg.checkpoint);
    tr.policy->set_deterministic(true);
    return std::make_unique<rl::PolicyHandle>(std::move(tr.policy));
}

void write_episode_csv(const std::string& path, const ExperimentConfig& cfg,
                       const rl::EpisodeResult& ep, int episode_index) {
    std::vector<std::string> header = {"episode", "t",       "x1",       "x2",
                                       "u_rl_x",  "u_rl_y",  "u_cbf_x",  "u_cbf_y",
                                       "eps",     "b_value", "critical_task",
                                       "active_region", "reward",
                                       "qp_active_set", "db_dx_x", "db_dx_y", "db_dt"};
    std::vector<std::string> region_names;
    for (const auto& [name, track] : ep.traj.regions) {
        header.push_back("region_" + name + "_cx");
        header.push_back("region_" + name + "_cy");
        region_names.push_back(name);
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(ep.rows.size());
    const double nan = std::nan("");
    for (std::size_t i = 0; i < ep.rows.size(); ++i) {
        const rl::StepRow& r = ep.rows[i];
        std::vector<double> row = {static_cast<double>(episode_index),
                                   r.t,
                                   r.x.x,
                                   r.x.y,
                                   r.u_rl.x,
                                   r.u_rl.y,
                                   r.u_cbf.x,
                                   r.u_cbf.y,
                                   r.eps,
                                   r.has_constraint ? r.b_value : nan,
                                   r.has_constraint ? static_cast<double>(r.critical_task) : nan,
                                   r.has_constraint ? static_cast<double>(r.active_region) : nan,
                                   r.reward,
                                   r.has_constraint ? static_cast<double>(r.qp_active_set) : nan,
                                   r.has_constraint ? r.db_dx.x : nan,
                                   r.has_constraint ? r.db_dx.y : nan,
                                   r.has_constraint ? r.db_dt : nan};
        for (const auto& name : region_names) {
            const auto& track = ep.traj.regions.at(name);
            row.push_back(track.centers[i].x);
            row.push_back(track.centers[i].y);
        }
        rows.push_back(std::move(row));
    }
    io::write_csv(path, header, rows);
    (void)cfg;
}

RunResult run_experiment(const ExperimentConfig& cfg_in, const std::string& out_dir) {
    RunResult out;
    fs::path dir = out_dir.empty() ? fs::path(cfg_in.output.dir) : fs::path(out_dir);
    fs::create_directories(dir);

    ExperimentConfig cfg = cfg_in;
    if (!cfg.checkpoint.empty() && fs::path(cfg.checkpoint).is_relative()) {
        cfg.checkpoint = (dir / cfg.checkpoint).string();
    }
    if (!cfg.checkpoint.empty()) {
        fs::create_directories(fs::path(cfg.checkpoint).parent_path());
    }

    std::vector<rl::CurvePoint> curve;
    auto policy = make_policy(cfg, &curve);

    if (!curve.empty()) {
        std::vector<std::vector<double>> rows;
        rows.reserve(curve.size());
        for (const auto& p : curve) {
            rows.push_back({static_cast<double>(p.episode), p.ret, p.stl_satisfied ? 1.0 : 0.0,
                            p.eps_max});
        }
        io::write_csv((dir / "learning_curve.csv").string(),
                      {"episode", "return", "stl_satisfied", "eps_max"}, rows);
    }

    std::vector<rl::EpisodeResult> kept;
    rl::Mode mode = (cfg.eval.mode == "unshielded") ? rl::Mode::Unshielded : rl::Mode::Shielded;
    out.report = evaluate(cfg, *policy, cfg.eval.episodes, mode, cfg.eval.workers,
                          cfg.eval.save_logs, &kept);

    for (std::size_t i = 0; i < kept.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "episode_%04zu.csv", i);
        write_episode_csv((dir / name).string(), cfg, kept[i], static_cast<int>(i));
    }

    out.report_json = out.report.to_json();
    out.report_json["config"] = {{"seed", cfg.seed}, {"spec", cfg.spec_text}};
    out.report_path = (dir / "report.json").string();
    std::ofstream rf(out.report_path);
    rf << out.report_json.dump(2) << "\n";

    if (cfg.output.plots) {
        render_run_plots(dir.string());
    }

    out.asserts_passed = true;
    if (cfg.eval.assert_satisfaction_min >= 0.0 &&
        out.report.satisfaction_rate < cfg.eval.assert_satisfaction_min) {
        out.asserts_passed = false;
    }
    if (cfg.eval.assert_bound && !(out.report.bound_pass && out.report.relaxation_ok &&
                                   out.report.hard_link_ok)) {
        out.asserts_passed = false;
    }
    return out;
}

}  // namespace stlshield::exp
