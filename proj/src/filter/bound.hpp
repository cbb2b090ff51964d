#pragma once

#include <algorithm>
#include <limits>

namespace stlshield::filter {

// Tracks the Theorem-1 lower bound b >= -eps_max/gamma - tol_disc along one
// barrier segment (a front obligation's reach or dwell phase). tol_disc
// budgets one Euler step of drift: (u_max + d_max) * dt * L_b with
// L_b = 1/(u_max - d_max) + 1.
struct BoundTracker {
    double gamma = 1.0;
    double tol_disc = 0.0;

    double eps_max = 0.0;           // over the current segment
    double worst_b = std::numeric_limits<double>::infinity();
    double min_margin = std::numeric_limits<double>::infinity();
    bool ok = true;

    static double discretization_tolerance(double u_max, double d_max, double dt) {
        double lb = 1.0 / (u_max - d_max) + 1.0;
        return (u_max + d_max) * dt * lb;
    }

    void start_segment() { eps_max = 0.0; }

    // Feeds one step's enforced barrier value and slack; returns whether the
    // bound held at this step.
    bool update(double b_value, double eps) {
        eps_max = std::max(eps_max, eps);
        worst_b = std::min(worst_b, b_value);
        double margin = b_value - (-eps_max / gamma - tol_disc);
        min_margin = std::min(min_margin, margin);
        bool pass = margin >= 0.0;
        ok = ok && pass;
        return pass;
    }
};

}  // namespace stlshield::filter
