#include <algorithm>

#include "core/error.hpp"
#include "stl/obligation.hpp"

namespace stlshield::stl {

namespace {

[[noreturn]] void unsupported(const Formula& f, const std::string& why) {
    throw Error(ErrorCode::UnsupportedShape,
                "unsupported task shape: " + why + " in '" + print(f) + "'");
}

// Collects a disjunction of inside-region predicates; nullopt when the
// formula has any other shape.
std::optional<std::vector<std::string>> region_disjunction(const Formula& f) {
    if (f.kind == NodeKind::Predicate) {
        if (f.pred.kind == Predicate::Kind::Region && f.pred.inside) {
            return std::vector<std::string>{f.pred.region};
        }
        return std::nullopt;
    }
    if (f.kind == NodeKind::Or) {
        std::vector<std::string> out;
        for (const auto& c : f.children) {
            auto sub = region_disjunction(*c);
            if (!sub) return std::nullopt;
            for (auto& name : *sub) {
                if (std::find(out.begin(), out.end(), name) == out.end()) {
                    out.push_back(std::move(name));
                }
            }
        }
        return out;
    }
    return std::nullopt;
}

// Collects a conjunction of outside-region predicates (!in(r) or an outside-
// polarity region predicate); nullopt otherwise.
std::optional<std::vector<std::string>> outside_conjunction(const Formula& f) {
    if (f.kind == NodeKind::Predicate && f.pred.kind == Predicate::Kind::Region &&
        !f.pred.inside) {
        return std::vector<std::string>{f.pred.region};
    }
    if (f.kind == NodeKind::Not) {
        const Formula& c = *f.children[0];
        if (c.kind == NodeKind::Predicate && c.pred.kind == Predicate::Kind::Region &&
            c.pred.inside) {
            return std::vector<std::string>{c.pred.region};
        }
        return std::nullopt;
    }
    if (f.kind == NodeKind::And) {
        std::vector<std::string> out;
        for (const auto& c : f.children) {
            auto sub = outside_conjunction(*c);
            if (!sub) return std::nullopt;
            out.insert(out.end(), sub->begin(), sub->end());
        }
        return out;
    }
    return std::nullopt;
}

void normalize_task(const Formula& task, int index, TaskSet& out) {
    if (task.kind == NodeKind::Finally) {
        const Formula& inner = *task.children[0];
        if (auto alts = region_disjunction(inner)) {
            Obligation ob;
            ob.alternatives = std::move(*alts);
            ob.release = task.interval.lo;
            ob.deadline = task.interval.hi;
            ob.task_index = index;
            out.obligations.push_back(std::move(ob));
            return;
        }
        if (inner.kind == NodeKind::Globally) {
            if (inner.interval.lo != 0.0) {
                unsupported(inner, "dwell window must start at 0");
            }
            auto alts = region_disjunction(*inner.children[0]);
            if (!alts) {
                unsupported(*inner.children[0],
                            "dwell target must be a disjunction of region predicates");
            }
            Obligation ob;
            ob.alternatives = std::move(*alts);
            ob.release = task.interval.lo;
            ob.deadline = task.interval.hi;
            ob.dwell = inner.interval.hi;
            ob.task_index = index;
            out.obligations.push_back(std::move(ob));
            return;
        }
        unsupported(inner, "reach target must be a disjunction of region predicates");
    }
    if (task.kind == NodeKind::Globally) {
        const Formula& inner = *task.children[0];
        if (inner.kind == NodeKind::Finally) {
            if (inner.interval.lo != 0.0) {
                unsupported(inner, "recurrence window must start at 0");
            }
            if (inner.interval.hi <= 0.0) {
                unsupported(inner, "recurrence period must be positive");
            }
            auto alts = region_disjunction(*inner.children[0]);
            if (!alts) {
                unsupported(*inner.children[0],
                            "recurring target must be a disjunction of region predicates");
            }
            Obligation ob;
            ob.alternatives = std::move(*alts);
            ob.release = task.interval.lo;
            ob.recurrence = inner.interval.hi;
            ob.deadline = task.interval.lo + inner.interval.hi;
            ob.coverage = task.interval.hi;
            ob.task_index = index;
            out.obligations.push_back(std::move(ob));
            return;
        }
        if (auto regions = outside_conjunction(inner)) {
            for (auto& name : *regions) {
                Avoidance av;
                av.region = std::move(name);
                av.from = task.interval.lo;
                av.until = task.interval.hi;
                av.task_index = index;
                out.avoidances.push_back(std::move(av));
            }
            return;
        }
        unsupported(inner,
                    "always-task must wrap F[0,c] (recurring visit) or outside-region predicates");
    }
    if (task.kind == NodeKind::Until) {
        unsupported(task, "until tasks have no obligation encoding");
    }
    unsupported(task, "task is not of a supported temporal shape");
}

}  // namespace

TaskSet normalize_tasks(const Formula& f) {
    TaskSet out;
    std::vector<const Formula*> tasks;
    std::vector<const Formula*> stack{&f};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (g->kind == NodeKind::And) {
            for (auto it = g->children.rbegin(); it != g->children.rend(); ++it) {
                stack.push_back(it->get());
            }
            continue;
        }
        tasks.push_back(g);
    }
    int index = 0;
    for (const Formula* task : tasks) {
        normalize_task(*task, index++, out);
    }
    return out;
}

}  // namespace stlshield::stl
