#pragma once

#include <string>

namespace stlshield::exp {

struct MonitorOutcome {
    bool satisfied = false;
    std::string report;  // "true"/"false" plus one line per top-level task
};

// Offline re-checking of a trajectory CSV (header t,x1,x2[,region_<n>_cx,
// region_<n>_cy ...]). Region shapes come from the optional config's world
// block; static regions may also take their centers from the config when the
// CSV has no columns for them.
MonitorOutcome monitor_csv(const std::string& spec_text, const std::string& csv_path,
                           const std::string& config_path);

}  // namespace stlshield::exp
