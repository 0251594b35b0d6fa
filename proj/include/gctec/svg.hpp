#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gctec {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "gain (dB)";
    bool log_x = false;
    int width = 720;
    int height = 480;
};

// Minimal static line plot writer; one labeled polyline per series.
inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style) {
    if (series.empty()) throw IoError("plot: no series to draw");
    const double ml = 70, mr = 130, mt = 40, mb = 55;
    const double pw = style.width - ml - mr, ph = style.height - mt - mb;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto tx = [&](double v) { return style.log_x ? std::log10(v) : v; };
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw IoError("plot: series size mismatch");
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  style.width, style.height, style.width, style.height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;
    // axis ticks: 5 ticks each
    for (int k = 0; k <= 5; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 5.0;
        const double vx = style.log_x ? std::pow(10.0, fx) : fx;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#444\"/>\n",
                      ml + pw * k / 5.0, mt + ph, ml + pw * k / 5.0, mt + ph + 5);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%.4g"
                      "</text>\n",
                      ml + pw * k / 5.0, mt + ph + 18, vx);
        svg += buf;
        const double vy = ymax - (ymax - ymin) * k / 5.0;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.4g"
                      "</text>\n",
                      ml - 6, mt + ph * k / 5.0 + 4, vy);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                  ml + pw / 2, static_cast<double>(style.height) - 12, style.x_label.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 16 %.1f)\">%s</text>\n",
                  mt + ph / 2, mt + ph / 2, style.y_label.c_str());
    svg += buf;
    if (!style.title.empty()) {
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">%s"
                      "</text>\n",
                      ml + pw / 2, style.title.c_str());
        svg += buf;
    }
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = colors[si % 6];
        std::string pts;
        for (size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            pts += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.6\" points=\"" + pts + "\"/>\n";
        const double ly = mt + 16.0 * si + 12.0;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n",
                      ml + pw + 10, ly, ml + pw + 34, ly, color);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%s</text>\n", ml + pw + 40,
                      ly + 4, s.label.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

inline void emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style,
                      const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open '" + file + "' for writing");
    out << render_svg(series, style);
    if (!out) throw IoError("write failed on '" + file + "'");
}

} // namespace gctec
