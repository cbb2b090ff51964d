#include "seq/sequence.hpp"

#include <algorithm>
#include <cmath>

namespace stlshield::seq {

namespace {

constexpr double kTimeEps = 1e-9;

std::vector<double> margined_taus(const std::vector<PlannedHit>& hits, double t, double margin) {
    std::vector<double> tau(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        tau[i] = hits[i].deadline - margin - t;
    }
    return tau;
}

std::vector<double> suffix_min(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    double best = 1e300;
    for (std::size_t k = v.size(); k-- > 0;) {
        best = std::min(best, v[k]);
        out[k] = best;
    }
    return out;
}

// Greedy alternative resolution for a freshly ordered candidate: each hit
// takes the alternative with the smallest worst-case distance from the
// previous chain element at the candidate's tau-bar estimates.
void resolve_alternatives(std::vector<PlannedHit>& hits, const Vec2& x, double t,
                          const world::World& w, const Params& params) {
    std::vector<double> tau = margined_taus(hits, t, params.deadline_margin);
    std::vector<double> bars = suffix_min(tau);
    std::optional<world::TargetSnapshot> prev;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        PlannedHit& h = hits[i];
        if (h.alt_regions.size() > 1) {
            double best_cost = 1e300;
            int best_alt = 0;
            for (std::size_t a = 0; a < h.alt_regions.size(); ++a) {
                world::TargetSnapshot alt = snapshot(w, h.alt_regions[a]);
                double cost;
                if (!prev) {
                    cost = world::signed_distance(x, alt.shape, alt.center) +
                           alt.speed_max * std::max(bars[i], 0.0);
                } else {
                    cost = world::sup_inf_distance(prev->shape, prev->center, alt.shape,
                                                   alt.center) +
                           prev->speed_max * std::max(bars[i - 1], 0.0) +
                           alt.speed_max * std::max(bars[i], 0.0);
                }
                if (cost < best_cost - 1e-12) {
                    best_cost = cost;
                    best_alt = static_cast<int>(a);
                }
            }
            h.chosen_alt = best_alt;
        }
        prev = snapshot(w, h.region());
    }
}

std::vector<cbf::ChainTask> chain_for_hits(const std::vector<PlannedHit>& hits, const Vec2&,
                                           double t, const world::World& w, const Params& params,
                                           double front_tau_override, bool has_override) {
    std::vector<cbf::ChainTask> chain;
    chain.reserve(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        cbf::ChainTask ct;
        ct.region_id = hits[i].region();
        ct.target = snapshot(w, ct.region_id);
        ct.tau = hits[i].deadline - params.deadline_margin - t;
        ct.dwell_remaining = hits[i].dwell;
        chain.push_back(ct);
    }
    if (has_override && !chain.empty()) {
        chain[0].tau = front_tau_override;
        chain[0].dwell_remaining = front_tau_override;
    }
    return chain;
}

bool feasible(const std::vector<PlannedHit>& hits, const Vec2& x, double t, const world::World& w,
              const Params& params) {
    auto chain = chain_for_hits(hits, x, t, w, params, 0.0, false);
    auto values = cbf::candidates(x, chain, params.cbf(), false);
    for (double v : values) {
        if (v < params.feasibility_margin - 1e-12) return false;
    }
    return true;
}

struct Enumerator {
    const std::vector<std::vector<PlannedHit>>& per_task;
    const Vec2& x;
    double t;
    const world::World& w;
    const Params& params;
    const std::function<void(const std::vector<PlannedHit>&)>& on_candidate;

    std::vector<std::size_t> cursor;
    std::vector<PlannedHit> current;
    std::optional<std::vector<PlannedHit>> found;

    void run() {
        cursor.assign(per_task.size(), 0);
        search();
    }

    void search() {
        if (found) return;
        // Choices: the next unplaced hit of every task, earliest deadline
        // first, ties by obligation id (stable and deterministic).
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < per_task.size(); ++k) {
            if (cursor[k] < per_task[k].size()) order.push_back(k);
        }
        if (order.empty()) {
            std::vector<PlannedHit> candidate = current;
            resolve_alternatives(candidate, x, t, w, params);
            if (on_candidate) on_candidate(candidate);
            if (feasible(candidate, x, t, w, params)) found = candidate;
            return;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
            const PlannedHit& a = per_task[lhs][cursor[lhs]];
            const PlannedHit& b = per_task[rhs][cursor[rhs]];
            if (a.deadline != b.deadline) return a.deadline < b.deadline;
            return a.obligation_id < b.obligation_id;
        });
        for (std::size_t k : order) {
            current.push_back(per_task[k][cursor[k]]);
            ++cursor[k];
            search();
            --cursor[k];
            current.pop_back();
            if (found) return;
        }
    }
};

}  // namespace

long dwell_samples_needed(double dwell, double dt) {
    if (dwell <= 0.0) return 1;
    return static_cast<long>(std::ceil(dwell / dt - kTimeEps)) + 1;
}

std::vector<std::vector<PlannedHit>> unroll(const stl::TaskSet& tasks,
                                            const world::WorldConfig& world_cfg) {
    std::vector<std::vector<PlannedHit>> out;
    int obligation_id = 0;
    for (const auto& ob : tasks.obligations) {
        PlannedHit base;
        base.obligation_id = obligation_id++;
        base.task_index = ob.task_index;
        for (const auto& name : ob.alternatives) {
            int idx = world_cfg.region_index(name);
            if (idx < 0) {
                throw Error(ErrorCode::Config,
                            "specification references unknown region '" + name + "'");
            }
            base.alt_regions.push_back(idx);
        }
        base.release = ob.release;
        base.dwell = ob.dwell;
        std::vector<PlannedHit> hits;
        if (!ob.recurrence) {
            base.deadline = ob.deadline;
            hits.push_back(base);
        } else {
            double a = ob.release;
            double b = ob.coverage;
            double c = *ob.recurrence;
            long count = static_cast<long>(std::ceil((b - a) / c - kTimeEps)) + 1;
            count = std::max<long>(count, 1);
            for (long i = 1; i <= count; ++i) {
                PlannedHit h = base;
                h.recurring = true;
                h.recurrence = c;
                h.coverage = b;
                h.deadline = std::min(a + static_cast<double>(i) * c, b + c);
                hits.push_back(h);
            }
        }
        out.push_back(std::move(hits));
    }
    return out;
}

world::TargetSnapshot snapshot(const world::World& w, int region_idx) {
    world::TargetSnapshot s;
    s.shape = w.region_spec(region_idx).shape;
    s.center = w.region_state(region_idx).center;
    s.speed_max = w.region_spec(region_idx).speed_max;
    return s;
}

std::vector<cbf::ChainTask> build_chain(const SequenceState& seq, const world::World& w, double t,
                                        const Params& params) {
    double dt = w.config().dt;
    return chain_for_hits(seq.pending, w.x(), t, w, params, seq.remaining_dwell(dt),
                          seq.dwell_active);
}

std::optional<SequenceState> generate_sequence(
    const Vec2& x, double t, const std::vector<std::vector<PlannedHit>>& per_task,
    const world::World& w, const Params& params,
    const std::function<void(const std::vector<PlannedHit>&)>& on_candidate) {
    SequenceState seq;
    bool any = false;
    for (const auto& hits : per_task) any = any || !hits.empty();
    if (!any) return seq;  // nothing to schedule

    Enumerator en{per_task, x, t, w, params, on_candidate, {}, {}, std::nullopt};
    en.run();
    if (!en.found) return std::nullopt;
    seq.pending = std::move(*en.found);
    return seq;
}

Vec2 sample_feasible_state(const std::vector<std::vector<PlannedHit>>& per_task,
                           const world::World& w, const Params& params, Rng& rng) {
    const auto& arena = w.config().arena;
    for (int attempt = 0; attempt < params.sample_budget; ++attempt) {
        Vec2 x{rng.uniform(arena.lo.x, arena.hi.x), rng.uniform(arena.lo.y, arena.hi.y)};
        if (generate_sequence(x, w.t(), per_task, w, params)) return x;
    }
    throw Error(ErrorCode::Infeasible,
                "no feasible initial state found in " + std::to_string(params.sample_budget) +
                    " samples; the task deadlines may be unachievable anywhere in the arena");
}

double min_candidate(const SequenceState& seq, const world::World& w, double t,
                     const Params& params) {
    auto chain = build_chain(seq, w, t, params);
    auto values = cbf::candidates(w.x(), chain, params.cbf(), seq.dwell_active);
    return cbf::critical(values).value;
}

void on_hit(SequenceState& seq, double t_hit) {
    if (seq.pending.empty()) return;
    PlannedHit front = seq.pending.front();
    seq.pending.erase(seq.pending.begin());
    seq.dwell_active = false;
    seq.dwell_samples = 0;
    seq.dwell_samples_needed = 0;
    if (!front.recurring) return;

    const double c = front.recurrence;
    const double cap = front.coverage + c;
    bool terminated = t_hit >= front.coverage - kTimeEps;
    if (terminated) {
        seq.pending.erase(std::remove_if(seq.pending.begin(), seq.pending.end(),
                                         [&](const PlannedHit& h) {
                                             return h.obligation_id == front.obligation_id;
                                         }),
                          seq.pending.end());
        return;
    }
    // Roll the remaining planned hits of this obligation: next deadline
    // t_hit + c, then + c each, never past coverage + c.
    long j = 1;
    bool saw_any = false;
    for (auto& h : seq.pending) {
        if (h.obligation_id != front.obligation_id) continue;
        h.deadline = std::min(t_hit + static_cast<double>(j) * c, cap);
        ++j;
        saw_any = true;
    }
    if (!saw_any) {
        // The unroll ran out before a hit landed past the coverage time.
        PlannedHit extra = front;
        extra.deadline = std::min(t_hit + c, cap);
        seq.pending.push_back(extra);
    }
    // Re-rolled deadlines can undercut later-ordered tasks; restore the
    // earliest-deadline order the generator would produce for them.
    std::stable_sort(seq.pending.begin(), seq.pending.end(),
                     [](const PlannedHit& a, const PlannedHit& b) {
                         return a.deadline < b.deadline;
                     });
}

void maybe_swap_alternative(SequenceState& seq, const world::World& w, const Vec2& x, double t,
                            const Params& params) {
    if (seq.pending.empty() || seq.dwell_active) return;
    PlannedHit& front = seq.pending.front();
    if (front.alt_regions.size() < 2) return;

    int incumbent = front.chosen_alt;
    int best = incumbent;
    double best_value;
    {
        auto chain = build_chain(seq, w, t, params);
        best_value = cbf::critical(cbf::candidates(x, chain, params.cbf(), false)).value;
    }
    for (int alt = 0; alt < static_cast<int>(front.alt_regions.size()); ++alt) {
        if (alt == incumbent) continue;
        front.chosen_alt = alt;
        auto chain = build_chain(seq, w, t, params);
        double value = cbf::critical(cbf::candidates(x, chain, params.cbf(), false)).value;
        if (value > best_value + 1e-12) {
            best_value = value;
            best = alt;
        }
    }
    front.chosen_alt = best;
}

}  // namespace stlshield::seq
