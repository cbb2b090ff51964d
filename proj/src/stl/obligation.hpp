#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stl/formula.hpp"

namespace stlshield::stl {

// One reach/dwell visit requirement extracted from a task of the supported
// conjunction class. Recurring obligations (G_[a,b] F_[0,c] φ) carry the
// recurrence period and the coverage time b.
struct Obligation {
    std::vector<std::string> alternatives;  // non-empty; disjunction of regions
    double release = 0.0;                   // earliest entry time
    double deadline = 0.0;                  // latest entry time (first hit for recurring)
    double dwell = 0.0;                     // required consecutive in-region duration
    std::optional<double> recurrence;       // period c for periodic tasks
    double coverage = 0.0;                  // recurring only: last required hit >= coverage
    int task_index = 0;                     // position among top-level conjuncts
};

// Always-style constraint exported but not enforced by the shield.
struct Avoidance {
    std::string region;
    bool keep_out = true;  // "outside region" predicates
    double from = 0.0;
    double until = 0.0;
    int task_index = 0;
};

struct TaskSet {
    std::vector<Obligation> obligations;
    std::vector<Avoidance> avoidances;
};

// Maps a top-level conjunction of supported task shapes onto obligations.
// Throws Error(UnsupportedShape) naming the offending subformula.
TaskSet normalize_tasks(const Formula& f);

}  // namespace stlshield::stl
