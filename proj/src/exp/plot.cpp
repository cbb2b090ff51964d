#include "exp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "core/error.hpp"
#include "io/csv.hpp"

namespace stlshield::exp {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 52.0;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double px0 = 0.0;
    double px1 = 1.0;

    double map(double v) const {
        double t = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        return px0 + t * (px1 - px0);
    }
};

struct Svg {
    std::string body;

    void line(double x1, double y1, double x2, double y2, const char* stroke, double w = 1.0) {
        body += "<line x1='" + num(x1) + "' y1='" + num(y1) + "' x2='" + num(x2) + "' y2='" +
                num(y2) + "' stroke='" + stroke + "' stroke-width='" + num(w) + "'/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke,
                  double w = 1.5) {
        if (pts.empty()) return;
        body += "<polyline fill='none' stroke='";
        body += stroke;
        body += "' stroke-width='" + num(w) + "' points='";
        for (const auto& [x, y] : pts) body += num(x) + "," + num(y) + " ";
        body += "'/>\n";
    }
    void circle(double cx, double cy, double r, const char* stroke, const char* fill) {
        body += "<circle cx='" + num(cx) + "' cy='" + num(cy) + "' r='" + num(r) + "' stroke='" +
                stroke + "' fill='" + fill + "' fill-opacity='0.15'/>\n";
    }
    void rect(double x, double y, double w, double h, const char* stroke, const char* fill) {
        body += "<rect x='" + num(x) + "' y='" + num(y) + "' width='" + num(w) + "' height='" +
                num(h) + "' stroke='" + stroke + "' fill='" + fill + "' fill-opacity='0.15'/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 12) {
        body += "<text x='" + num(x) + "' y='" + num(y) + "' font-size='" +
                std::to_string(size) + "' font-family='monospace'>" + s + "</text>\n";
    }

    void save(const std::string& path, double w, double h) {
        std::ofstream out(path);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
            << "' viewBox='0 0 " << w << " " << h << "'>\n<rect width='100%' height='100%' "
            << "fill='white'/>\n"
            << body << "</svg>\n";
    }
};

void axes(Svg& svg, const Axis& x, const Axis& y, const std::string& xlabel,
          const std::string& ylabel) {
    svg.line(x.px0, y.px0, x.px1, y.px0, "black");
    svg.line(x.px0, y.px0, x.px0, y.px1, "black");
    svg.text(x.px1 - 8.0 * static_cast<double>(xlabel.size()), y.px0 + 34, xlabel);
    svg.text(x.px0 - 40, y.px1 - 10, ylabel);
    svg.text(x.px0 - 6, y.px0 + 16, io::format_double(x.lo));
    svg.text(x.px1 - 20, y.px0 + 16, io::format_double(x.hi));
    svg.text(x.px0 - 46, y.px0 + 4, io::format_double(y.lo));
    svg.text(x.px0 - 46, y.px1 + 4, io::format_double(y.hi));
}

std::pair<double, double> minmax(const io::CsvTable& t, int col) {
    double lo = 1e300;
    double hi = -1e300;
    for (const auto& row : t.rows) {
        double v = row[static_cast<std::size_t>(col)];
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    return {lo, hi};
}

}  // namespace

void plot_learning_curve(const std::string& curve_csv, const std::string& out_svg) {
    io::CsvTable t = io::read_csv(curve_csv);
    int ce = t.column("episode");
    int cr = t.column("return");
    if (ce < 0 || cr < 0) throw Error(ErrorCode::Io, "learning curve csv lacks episode/return");
    Svg svg;
    auto [xlo, xhi] = minmax(t, ce);
    auto [ylo, yhi] = minmax(t, cr);
    Axis ax{xlo, xhi, kMargin, kWidth - kMargin};
    Axis ay{ylo, yhi, kHeight - kMargin, kMargin};
    axes(svg, ax, ay, "episode", "return");
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : t.rows) {
        pts.emplace_back(ax.map(row[static_cast<std::size_t>(ce)]),
                         ay.map(row[static_cast<std::size_t>(cr)]));
    }
    svg.polyline(pts, "#1f77b4");
    // 10-episode moving average.
    std::vector<std::pair<double, double>> avg;
    double acc = 0.0;
    std::vector<double> window;
    for (const auto& row : t.rows) {
        window.push_back(row[static_cast<std::size_t>(cr)]);
        acc += window.back();
        if (window.size() > 10) {
            acc -= window[window.size() - 11];
        }
        double n = std::min<std::size_t>(window.size(), 10);
        avg.emplace_back(ax.map(row[static_cast<std::size_t>(ce)]),
                         ay.map(acc / static_cast<double>(n)));
    }
    svg.polyline(avg, "#d62728", 2.0);
    svg.text(kMargin, kMargin - 16, "learning curve (raw + 10-episode mean)");
    svg.save(out_svg, kWidth, kHeight);
}

void plot_trajectory(const std::string& episode_csv, const std::string& out_svg) {
    io::CsvTable t = io::read_csv(episode_csv);
    int cx = t.column("x1");
    int cy = t.column("x2");
    if (cx < 0 || cy < 0) throw Error(ErrorCode::Io, "episode csv lacks x1/x2 columns");

    // Data extents over the path and all region traces.
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    std::vector<std::pair<int, int>> region_cols;
    std::vector<std::string> region_names;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        if (h.rfind("region_", 0) == 0 && h.size() > 10 && h.substr(h.size() - 3) == "_cx") {
            std::string name = h.substr(7, h.size() - 10);
            int cyc = t.column("region_" + name + "_cy");
            if (cyc >= 0) {
                region_cols.emplace_back(static_cast<int>(c), cyc);
                region_names.push_back(name);
            }
        }
    }
    auto widen = [&](double x, double y) {
        lo_x = std::min(lo_x, x); hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y); hi_y = std::max(hi_y, y);
    };
    for (const auto& row : t.rows) {
        widen(row[static_cast<std::size_t>(cx)], row[static_cast<std::size_t>(cy)]);
        for (const auto& [cxc, cyc] : region_cols) {
            widen(row[static_cast<std::size_t>(cxc)], row[static_cast<std::size_t>(cyc)]);
        }
    }
    if (lo_x > hi_x) { lo_x = 0; hi_x = 1; lo_y = 0; hi_y = 1; }
    double pad_x = 0.08 * (hi_x - lo_x + 1e-9);
    double pad_y = 0.08 * (hi_y - lo_y + 1e-9);

    Svg svg;
    double side = 560.0;
    Axis ax{lo_x - pad_x, hi_x + pad_x, kMargin, side - kMargin};
    Axis ay{lo_y - pad_y, hi_y + pad_y, side - kMargin, kMargin};
    axes(svg, ax, ay, "x1", "x2");

    static const char* palette[] = {"#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
    for (std::size_t k = 0; k < region_cols.size(); ++k) {
        const char* color = palette[k % 5];
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : t.rows) {
            pts.emplace_back(ax.map(row[static_cast<std::size_t>(region_cols[k].first)]),
                             ay.map(row[static_cast<std::size_t>(region_cols[k].second)]));
        }
        svg.polyline(pts, color, 0.8);
        if (!t.rows.empty()) {
            const auto& last = t.rows.back();
            svg.circle(ax.map(last[static_cast<std::size_t>(region_cols[k].first)]),
                       ay.map(last[static_cast<std::size_t>(region_cols[k].second)]), 10.0, color,
                       color);
            svg.text(ax.map(last[static_cast<std::size_t>(region_cols[k].first)]) + 12,
                     ay.map(last[static_cast<std::size_t>(region_cols[k].second)]),
                     region_names[k], 11);
        }
    }
    std::vector<std::pair<double, double>> path;
    for (const auto& row : t.rows) {
        path.emplace_back(ax.map(row[static_cast<std::size_t>(cx)]),
                          ay.map(row[static_cast<std::size_t>(cy)]));
    }
    svg.polyline(path, "#1f77b4", 1.2);
    if (!path.empty()) {
        svg.circle(path.front().first, path.front().second, 4.0, "#1f77b4", "#1f77b4");
    }
    svg.text(kMargin, kMargin - 16, "trajectory (agent path, region center traces)");
    svg.save(out_svg, side, side);
}

void plot_traces(const std::string& episode_csv, const std::string& out_svg) {
    io::CsvTable t = io::read_csv(episode_csv);
    int ct = t.column("t");
    int cb = t.column("b_value");
    int ce = t.column("eps");
    if (ct < 0 || cb < 0 || ce < 0) {
        throw Error(ErrorCode::Io, "episode csv lacks t/b_value/eps columns");
    }
    Svg svg;
    auto [tlo, thi] = minmax(t, ct);
    auto [blo, bhi] = minmax(t, cb);
    auto [elo, ehi] = minmax(t, ce);
    double half = kHeight / 2.0;
    Axis ax_top{tlo, thi, kMargin, kWidth - kMargin};
    Axis ay_top{std::min(blo, 0.0), bhi, half - 28.0, 28.0};
    Axis ax_bot = ax_top;
    Axis ay_bot{std::min(elo, 0.0), std::max(ehi, 1e-6), kHeight - kMargin, half + 28.0};

    axes(svg, ax_top, ay_top, "t", "b");
    axes(svg, ax_bot, ay_bot, "t", "eps");
    if (ay_top.lo < 0.0) {
        svg.line(ax_top.px0, ay_top.map(0.0), ax_top.px1, ay_top.map(0.0), "#bbbbbb");
    }
    std::vector<std::pair<double, double>> bpts, epts;
    for (const auto& row : t.rows) {
        double bv = row[static_cast<std::size_t>(cb)];
        if (!std::isnan(bv)) {
            bpts.emplace_back(ax_top.map(row[static_cast<std::size_t>(ct)]), ay_top.map(bv));
        }
        epts.emplace_back(ax_bot.map(row[static_cast<std::size_t>(ct)]),
                          ay_bot.map(row[static_cast<std::size_t>(ce)]));
    }
    svg.polyline(bpts, "#1f77b4");
    svg.polyline(epts, "#d62728");
    svg.text(kMargin, 18, "critical CBF value b(t) and slack eps(t)");
    svg.save(out_svg, kWidth, kHeight);
}

void render_run_plots(const std::string& run_dir) {
    fs::path dir(run_dir);
    fs::path curve = dir / "learning_curve.csv";
    if (fs::exists(curve)) {
        plot_learning_curve(curve.string(), (dir / "learning_curve.svg").string());
    }
    std::vector<fs::path> episodes;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("episode_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".csv") {
            episodes.push_back(entry.path());
        }
    }
    std::sort(episodes.begin(), episodes.end());
    if (!episodes.empty()) {
        plot_trajectory(episodes.front().string(), (dir / "trajectory.svg").string());
        plot_traces(episodes.front().string(), (dir / "traces.svg").string());
    }
}

}  // namespace stlshield::exp
