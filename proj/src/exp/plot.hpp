#pragma once

#include <string>

namespace stlshield::exp {

// SVG emission from saved CSVs; byte-deterministic for identical inputs.
void plot_learning_curve(const std::string& curve_csv, const std::string& out_svg);
void plot_trajectory(const std::string& episode_csv, const std::string& out_svg);
void plot_traces(const std::string& episode_csv, const std::string& out_svg);

// Renders every plot the run directory's CSVs support.
void render_run_plots(const std::string& run_dir);

}  // namespace stlshield::exp
