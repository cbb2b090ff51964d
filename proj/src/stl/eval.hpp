#pragma once

#include <map>
#include <string>
#include <vector>

#include "stl/formula.hpp"
#include "world/geometry.hpp"

namespace stlshield::stl {

// Sampled 2D signal with optional per-sample region snapshots. Region shapes
// are fixed; centers move sample to sample.
struct Trajectory {
    double dt = 0.1;
    std::vector<Vec2> samples;

    struct RegionTrack {
        world::Shape shape;
        std::vector<Vec2> centers;  // one per sample
    };
    std::map<std::string, RegionTrack> regions;

    double duration() const {
        return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1);
    }
};

// Discrete-time satisfaction of f over (traj, t_start). Interval bounds map to
// sample indices ceil((t+a)/dt) .. floor((t+b)/dt). Throws Error
// (ShortTrajectory / MissingSignal) when the trajectory cannot support the
// evaluation.
bool satisfies(const Trajectory& traj, const Formula& f, double t_start);

// Per-top-level-conjunct diagnostics for monitor output.
struct TaskVerdict {
    int task_index = 0;
    std::string text;
    bool satisfied = false;
    // Earliest witnessing time (F/U roots) or earliest violating window start
    // (G roots), in time units; negative when not applicable.
    double witness_time = -1.0;
    bool has_witness = false;
};

struct MonitorReport {
    bool satisfied = false;
    std::vector<TaskVerdict> tasks;
};

MonitorReport monitor(const Trajectory& traj, const Formula& f, double t_start);

}  // namespace stlshield::stl
