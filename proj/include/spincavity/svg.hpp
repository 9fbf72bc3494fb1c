// svg.hpp — Minimal self-contained SVG line charts and heatmaps
//
// Presentation only: every number plotted here also lands in a CSV, and
// deleting the SVG never changes any other output.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "spincavity/core.hpp"

namespace spincavity::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Extent {
    double lo = 0.0, hi = 1.0;

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    static Extent of(const std::vector<const std::vector<double>*>& columns) {
        Extent e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const auto* col : columns) {
            for (double v : *col) e.include(v);
        }
        if (!(e.lo < e.hi)) {
            e.lo -= 0.5;
            e.hi += 0.5;
        }
        return e;
    }
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// piecewise-linear viridis-like colormap
inline std::string colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                       {94, 201, 98}, {253, 231, 37}};
    const double s = t * 4.0;
    const int k = std::min(3, static_cast<int>(s));
    const double f = s - k;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

} // namespace detail

inline void line_chart(const std::string& path, const std::vector<Series>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<double>& vertical_marks = {}) {
    if (series.empty()) throw ParameterError("line_chart: no series");
    const int width = 720, height = 480, margin = 56;
    std::vector<const std::vector<double>*> xs, ys;
    for (const auto& s : series) {
        xs.push_back(&s.x);
        ys.push_back(&s.y);
    }
    const auto ex = detail::Extent::of(xs);
    const auto ey = detail::Extent::of(ys);
    auto px = [&](double v) {
        return margin + (v - ex.lo) / (ex.hi - ex.lo) * (width - 2 * margin);
    };
    auto py = [&](double v) {
        return height - margin - (v - ey.lo) / (ey.hi - ey.lo) * (height - 2 * margin);
    };
    std::ofstream out(path);
    if (!out) throw ParameterError("line_chart: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    // axes with min/max ticks
    out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
        << "' y2='" << height - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << height - margin << "' stroke='black'/>\n";
    out << "<text x='" << width / 2 << "' y='" << height - 12 << "' text-anchor='middle'>"
        << x_label << "</text>\n";
    out << "<text x='16' y='" << height / 2 << "' transform='rotate(-90 16 " << height / 2
        << ")' text-anchor='middle'>" << y_label << "</text>\n";
    out << "<text x='" << margin << "' y='" << height - margin + 16 << "'>" << detail::fmt(ex.lo)
        << "</text>\n";
    out << "<text x='" << width - margin << "' y='" << height - margin + 16
        << "' text-anchor='end'>" << detail::fmt(ex.hi) << "</text>\n";
    out << "<text x='" << margin - 4 << "' y='" << height - margin << "' text-anchor='end'>"
        << detail::fmt(ey.lo) << "</text>\n";
    out << "<text x='" << margin - 4 << "' y='" << margin + 4 << "' text-anchor='end'>"
        << detail::fmt(ey.hi) << "</text>\n";
    for (double v : vertical_marks) {
        out << "<line x1='" << px(v) << "' y1='" << margin << "' x2='" << px(v) << "' y2='"
            << height - margin << "' stroke='#d62728' stroke-dasharray='4 3'/>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill='none' stroke='" << detail::kPalette[s % 8]
            << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            out << detail::fmt(px(series[s].x[i])) << ',' << detail::fmt(py(series[s].y[i])) << ' ';
        }
        out << "'/>\n";
        out << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * (s + 1)
            << "' fill='" << detail::kPalette[s % 8] << "' text-anchor='start' font-size='11'>"
            << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
}

// values[iy][ix]; ys index rows, xs index columns
inline void heatmap(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::vector<std::vector<double>>& values,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label) {
    if (values.size() != ys.size() || ys.empty() || xs.empty()) {
        throw ParameterError("heatmap: inconsistent grid");
    }
    const int width = 760, height = 520, margin = 56;
    double lo = values[0][0], hi = values[0][0];
    for (const auto& row : values) {
        if (row.size() != xs.size()) throw ParameterError("heatmap: ragged rows");
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi == lo) hi = lo + 1.0;
    const double cw = static_cast<double>(width - 2 * margin) / xs.size();
    const double ch = static_cast<double>(height - 2 * margin) / ys.size();
    std::ofstream out(path);
    if (!out) throw ParameterError("heatmap: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double t = (values[iy][ix] - lo) / (hi - lo);
            out << "<rect x='" << detail::fmt(margin + ix * cw) << "' y='"
                << detail::fmt(height - margin - (iy + 1) * ch) << "' width='"
                << detail::fmt(cw + 0.5) << "' height='" << detail::fmt(ch + 0.5) << "' fill='"
                << detail::colormap(t) << "'/>\n";
        }
    }
    out << "<text x='" << width / 2 << "' y='" << height - 12 << "' text-anchor='middle'>"
        << x_label << "</text>\n";
    out << "<text x='16' y='" << height / 2 << "' transform='rotate(-90 16 " << height / 2
        << ")' text-anchor='middle'>" << y_label << "</text>\n";
    out << "<text x='" << margin << "' y='" << height - margin + 16 << "'>" << detail::fmt(xs.front())
        << "</text>\n";
    out << "<text x='" << width - margin << "' y='" << height - margin + 16
        << "' text-anchor='end'>" << detail::fmt(xs.back()) << "</text>\n";
    out << "<text x='" << margin - 4 << "' y='" << height - margin << "' text-anchor='end'>"
        << detail::fmt(ys.front()) << "</text>\n";
    out << "<text x='" << margin - 4 << "' y='" << margin + 4 << "' text-anchor='end'>"
        << detail::fmt(ys.back()) << "</text>\n";
    out << "<text x='" << width - margin + 4 << "' y='" << margin << "'>" << detail::fmt(hi)
        << "</text>\n";
    out << "<text x='" << width - margin + 4 << "' y='" << height - margin << "'>"
        << detail::fmt(lo) << "</text>\n";
    out << "</svg>\n";
}

} // namespace spincavity::svg
