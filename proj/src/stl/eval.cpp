#include "stl/eval.hpp"

#include <cmath>
#include <unordered_map>

#include "core/error.hpp"

namespace stlshield::stl {

namespace {

constexpr double kGridEps = 1e-9;

long ceil_index(double t, double dt) {
    return static_cast<long>(std::ceil(t / dt - kGridEps));
}

long floor_index(double t, double dt) {
    return static_cast<long>(std::floor(t / dt + kGridEps));
}

class Evaluator {
public:
    Evaluator(const Trajectory& traj, const Formula& root) : traj_(traj) {
        index_nodes(root);
        memo_.assign(nodes_.size(), std::vector<signed char>(traj.samples.size(), -1));
    }

    bool eval(const Formula& f, long i) {
        if (i < 0 || i >= static_cast<long>(traj_.samples.size())) {
            throw Error(ErrorCode::ShortTrajectory,
                        "trajectory too short: needs sample index " + std::to_string(i) +
                            " but has " + std::to_string(traj_.samples.size()) + " samples");
        }
        int id = ids_.at(&f);
        signed char& slot = memo_[id][static_cast<std::size_t>(i)];
        if (slot >= 0) return slot != 0;
        bool v = eval_uncached(f, i);
        slot = v ? 1 : 0;
        return v;
    }

private:
    void index_nodes(const Formula& f) {
        if (ids_.count(&f)) return;
        ids_[&f] = static_cast<int>(nodes_.size());
        nodes_.push_back(&f);
        for (const auto& c : f.children) index_nodes(*c);
    }

    bool eval_pred(const Predicate& p, long i) {
        const Vec2& x = traj_.samples[static_cast<std::size_t>(i)];
        if (p.kind == Predicate::Kind::Affine) {
            double v = p.a1 * x.x + p.a2 * x.y + p.b;
            return p.rel == Relation::Ge ? v >= 0.0 : v <= 0.0;
        }
        auto it = traj_.regions.find(p.region);
        if (it == traj_.regions.end()) {
            throw Error(ErrorCode::MissingSignal,
                        "trajectory carries no snapshots for region '" + p.region + "'");
        }
        const auto& track = it->second;
        double sd = world::signed_distance(x, track.shape, track.centers[static_cast<std::size_t>(i)]);
        return p.inside ? -sd >= 0.0 : sd >= 0.0;
    }

    bool eval_uncached(const Formula& f, long i) {
        double t = static_cast<double>(i) * traj_.dt;
        switch (f.kind) {
            case NodeKind::Predicate:
                return eval_pred(f.pred, i);
            case NodeKind::Not:
                return !eval(*f.children[0], i);
            case NodeKind::And:
                for (const auto& c : f.children) {
                    if (!eval(*c, i)) return false;
                }
                return true;
            case NodeKind::Or:
                for (const auto& c : f.children) {
                    if (eval(*c, i)) return true;
                }
                return false;
            case NodeKind::Finally: {
                long lo = ceil_index(t + f.interval.lo, traj_.dt);
                long hi = floor_index(t + f.interval.hi, traj_.dt);
                for (long j = lo; j <= hi; ++j) {
                    if (eval(*f.children[0], j)) return true;
                }
                return false;
            }
            case NodeKind::Globally: {
                long lo = ceil_index(t + f.interval.lo, traj_.dt);
                long hi = floor_index(t + f.interval.hi, traj_.dt);
                for (long j = lo; j <= hi; ++j) {
                    if (!eval(*f.children[0], j)) return false;
                }
                return true;
            }
            case NodeKind::Until: {
                long lo = ceil_index(t + f.interval.lo, traj_.dt);
                long hi = floor_index(t + f.interval.hi, traj_.dt);
                for (long j = lo; j <= hi; ++j) {
                    if (!eval(*f.children[1], j)) continue;
                    bool prefix = true;
                    for (long k = i; k <= j; ++k) {
                        if (!eval(*f.children[0], k)) {
                            prefix = false;
                            break;
                        }
                    }
                    if (prefix) return true;
                }
                return false;
            }
        }
        return false;
    }

    const Trajectory& traj_;
    std::unordered_map<const Formula*, int> ids_;
    std::vector<const Formula*> nodes_;
    std::vector<std::vector<signed char>> memo_;
};

void require_coverage(const Trajectory& traj, const Formula& f, double t_start) {
    if (traj.samples.empty()) {
        throw Error(ErrorCode::ShortTrajectory, "trajectory has no samples");
    }
    if (traj.dt <= 0.0) {
        throw Error(ErrorCode::Argument, "trajectory sample period must be positive");
    }
    long last_needed = floor_index(t_start + horizon(f), traj.dt);
    long have = static_cast<long>(traj.samples.size()) - 1;
    if (last_needed > have) {
        throw Error(ErrorCode::ShortTrajectory,
                    "trajectory too short: horizon needs time " +
                        std::to_string(t_start + horizon(f)) + " but trajectory ends at " +
                        std::to_string(traj.duration()));
    }
    for (const auto& [name, track] : traj.regions) {
        if (track.centers.size() != traj.samples.size()) {
            throw Error(ErrorCode::MissingSignal,
                        "region '" + name + "' snapshot count does not match sample count");
        }
    }
}

}  // namespace

bool satisfies(const Trajectory& traj, const Formula& f, double t_start) {
    require_coverage(traj, f, t_start);
    long i0 = ceil_index(t_start, traj.dt);
    Evaluator ev(traj, f);
    return ev.eval(f, i0);
}

MonitorReport monitor(const Trajectory& traj, const Formula& f, double t_start) {
    require_coverage(traj, f, t_start);

    // Flatten the top-level conjunction into tasks.
    std::vector<const Formula*> tasks;
    std::vector<const Formula*> stack{&f};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (g->kind == NodeKind::And) {
            for (auto it = g->children.rbegin(); it != g->children.rend(); ++it) {
                stack.push_back(it->get());
            }
        } else {
            tasks.push_back(g);
        }
    }

    MonitorReport report;
    report.satisfied = true;
    Evaluator ev(traj, f);
    long i0 = ceil_index(t_start, traj.dt);
    int idx = 0;
    for (const Formula* task : tasks) {
        TaskVerdict tv;
        tv.task_index = idx++;
        tv.text = print(*task);
        tv.satisfied = ev.eval(*task, i0);
        report.satisfied = report.satisfied && tv.satisfied;
        // Earliest witness (F/U satisfied) or earliest violating window (G violated).
        double t = static_cast<double>(i0) * traj.dt;
        if (task->kind == NodeKind::Finally || task->kind == NodeKind::Until) {
            if (tv.satisfied) {
                const Formula& target =
                    (task->kind == NodeKind::Finally) ? *task->children[0] : *task->children[1];
                long lo = ceil_index(t + task->interval.lo, traj.dt);
                long hi = floor_index(t + task->interval.hi, traj.dt);
                for (long j = lo; j <= hi; ++j) {
                    if (ev.eval(target, j)) {
                        tv.witness_time = static_cast<double>(j) * traj.dt;
                        tv.has_witness = true;
                        break;
                    }
                }
            }
        } else if (task->kind == NodeKind::Globally) {
            if (!tv.satisfied) {
                long lo = ceil_index(t + task->interval.lo, traj.dt);
                long hi = floor_index(t + task->interval.hi, traj.dt);
                for (long j = lo; j <= hi; ++j) {
                    if (!ev.eval(*task->children[0], j)) {
                        tv.witness_time = static_cast<double>(j) * traj.dt;
                        tv.has_witness = true;
                        break;
                    }
                }
            }
        }
        report.tasks.push_back(tv);
    }
    if (tasks.empty()) report.satisfied = true;
    return report;
}

}  // namespace stlshield::stl
