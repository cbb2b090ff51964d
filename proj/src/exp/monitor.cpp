#include "exp/monitor.hpp"

#include <cmath>
#include <sstream>

#include "exp/config.hpp"
#include "io/csv.hpp"
#include "stl/eval.hpp"

namespace stlshield::exp {

namespace {

double infer_dt(const io::CsvTable& t, int time_col) {
    if (t.rows.size() < 2) {
        throw Error(ErrorCode::ShortTrajectory, "trajectory csv needs at least two samples");
    }
    double dt = t.rows[1][static_cast<std::size_t>(time_col)] -
                t.rows[0][static_cast<std::size_t>(time_col)];
    if (!(dt > 0.0)) throw Error(ErrorCode::Io, "trajectory time column must increase");
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        double step = t.rows[i][static_cast<std::size_t>(time_col)] -
                      t.rows[i - 1][static_cast<std::size_t>(time_col)];
        if (std::fabs(step - dt) > 1e-6 * std::max(1.0, dt)) {
            throw Error(ErrorCode::Io, "trajectory time column is not uniformly sampled");
        }
    }
    return dt;
}

}  // namespace

MonitorOutcome monitor_csv(const std::string& spec_text, const std::string& csv_path,
                           const std::string& config_path) {
    stl::FormulaPtr spec = stl::parse(spec_text);
    io::CsvTable table = io::read_csv(csv_path);

    int ct = table.column("t");
    int cx = table.column("x1");
    int cy = table.column("x2");
    if (ct < 0) throw Error(ErrorCode::MissingSignal, "trajectory csv misses column 't'");
    if (cx < 0 || cy < 0) {
        throw Error(ErrorCode::MissingSignal, "trajectory csv misses columns 'x1'/'x2'");
    }

    stl::Trajectory traj;
    traj.dt = infer_dt(table, ct);
    traj.samples.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        traj.samples.push_back(
            {row[static_cast<std::size_t>(cx)], row[static_cast<std::size_t>(cy)]});
    }

    std::optional<world::WorldConfig> world_cfg;
    if (!config_path.empty()) {
        nlohmann::json j = load_json_file(config_path);
        if (!j.contains("world")) {
            throw Error(ErrorCode::Config, "config '" + config_path + "' has no world block");
        }
        world_cfg = parse_world(j.at("world"), "world");
    }

    for (const std::string& name : stl::referenced_regions(*spec)) {
        int rx = table.column("region_" + name + "_cx");
        int ry = table.column("region_" + name + "_cy");
        const world::RegionSpec* spec_region = nullptr;
        if (world_cfg) {
            int idx = world_cfg->region_index(name);
            if (idx >= 0) spec_region = &world_cfg->regions[static_cast<std::size_t>(idx)];
            else if (world_cfg->goal.name == name) spec_region = &world_cfg->goal;
        }
        if (spec_region == nullptr) {
            throw Error(ErrorCode::MissingSignal,
                        "region '" + name + "' needs shape information; pass --config");
        }
        auto& track = traj.regions[name];
        track.shape = spec_region->shape;
        track.centers.reserve(traj.samples.size());
        if (rx >= 0 && ry >= 0) {
            for (const auto& row : table.rows) {
                track.centers.push_back(
                    {row[static_cast<std::size_t>(rx)], row[static_cast<std::size_t>(ry)]});
            }
        } else if (spec_region->script.kind == world::Script::Kind::Static) {
            world::RegionState st = world::region_reset(*spec_region);
            track.centers.assign(traj.samples.size(), st.center);
        } else {
            throw Error(ErrorCode::MissingSignal,
                        "trajectory csv misses columns region_" + name + "_cx/_cy for a moving region");
        }
    }

    stl::MonitorReport rep = stl::monitor(traj, *spec, 0.0);
    MonitorOutcome out;
    out.satisfied = rep.satisfied;
    std::ostringstream os;
    os << (rep.satisfied ? "true" : "false") << "\n";
    for (const auto& task : rep.tasks) {
        os << "task " << task.task_index << ": " << (task.satisfied ? "satisfied" : "violated");
        if (task.has_witness) {
            if (task.satisfied) {
                os << " (earliest witness at t=" << io::format_double(task.witness_time) << ")";
            } else {
                os << " (earliest violating window starts at t="
                   << io::format_double(task.witness_time) << ")";
            }
        }
        os << "  " << task.text << "\n";
    }
    out.report = os.str();
    return out;
}

}  // namespace stlshield::exp
