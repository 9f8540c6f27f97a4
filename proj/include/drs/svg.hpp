#pragma once

#include "drs/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace drs {

// Minimal self-contained SVG 1.1 plot writer: line and scatter series on
// linear or log-scaled y axes, plus a grayscale heatmap for surfaces. Kept
// deliberately small; every figure also ships as raw columnar data, the SVG
// is only a rendering.

struct SvgSeries {
    std::string label;
    std::string color; // CSS color
    bool scatter = false;
    std::vector<std::pair<double, double>> points;
};

struct SvgOptions {
    int width = 860;
    int height = 540;
    bool log_y = false;
    std::string title;
    std::string x_label;
    std::string y_label;
};

namespace detail {

inline std::string svg_num(double v) { return format_double(v, 6); }

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opt) {
    const double ml = 70, mr = 20, mt = opt.title.empty() ? 20 : 44, mb = 50;
    const double pw = opt.width - ml - mr;
    const double ph = opt.height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (opt.log_y && y <= 0.0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin)) { xmin = 0; xmax = 1; ymin = opt.log_y ? 0.1 : 0; ymax = 1; }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin = opt.log_y ? ymin * 0.5 : ymin - 0.5; ymax = opt.log_y ? ymax * 2.0 : ymax + 0.5; }

    auto ty = [&](double y) {
        const double a = opt.log_y ? std::log10(y) : y;
        const double lo = opt.log_y ? std::log10(ymin) : ymin;
        const double hi = opt.log_y ? std::log10(ymax) : ymax;
        return mt + ph * (1.0 - (a - lo) / (hi - lo));
    };
    auto tx = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_int(opt.width) + "\" height=\"" + format_int(opt.height) + "\" viewBox=\"0 0 " +
           format_int(opt.width) + " " + format_int(opt.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        out += "<text x=\"" + detail::svg_num(ml + pw / 2) +
               "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" font-family=\"sans-serif\">" +
               detail::xml_escape(opt.title) + "</text>\n";

    // Axes.
    out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt + ph) + "\" x2=\"" +
           detail::svg_num(ml + pw) + "\" y2=\"" + detail::svg_num(mt + ph) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" +
           detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(mt + ph) + "\" stroke=\"black\"/>\n";

    // Ticks: 6 on x; 6 on y (decades when log).
    const int nticks = 6;
    for (int i = 0; i < nticks; ++i) {
        const double x = xmin + (xmax - xmin) * i / (nticks - 1);
        const double px = tx(x);
        out += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(mt + ph) +
               "\" x2=\"" + detail::svg_num(px) + "\" y2=\"" + detail::svg_num(mt + ph + 5) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + detail::svg_num(px) + "\" y=\"" + detail::svg_num(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
               format_double(x, 3) + "</text>\n";
    }
    for (int i = 0; i < nticks; ++i) {
        const double lo = opt.log_y ? std::log10(ymin) : ymin;
        const double hi = opt.log_y ? std::log10(ymax) : ymax;
        const double a = lo + (hi - lo) * i / (nticks - 1);
        const double y = opt.log_y ? std::pow(10.0, a) : a;
        const double py = ty(y);
        out += "<line x1=\"" + detail::svg_num(ml - 5) + "\" y1=\"" + detail::svg_num(py) +
               "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(py) +
               "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" + detail::svg_num(py + 4) +
               "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
               format_double(y, 3) + "</text>\n";
    }
    if (!opt.x_label.empty())
        out += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
               detail::svg_num(mt + ph + 38) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
               detail::xml_escape(opt.x_label) + "</text>\n";
    if (!opt.y_label.empty())
        out += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 " +
               detail::svg_num(mt + ph / 2) + ")\">" + detail::xml_escape(opt.y_label) +
               "</text>\n";

    // Series.
    for (const auto& s : series) {
        if (s.scatter) {
            for (const auto& [x, y] : s.points) {
                if (opt.log_y && y <= 0.0) continue;
                out += "<circle cx=\"" + detail::svg_num(tx(x)) + "\" cy=\"" +
                       detail::svg_num(ty(y)) + "\" r=\"2\" fill=\"" + s.color +
                       "\" fill-opacity=\"0.6\"/>\n";
            }
        } else {
            std::string path;
            bool pen_down = false;
            for (const auto& [x, y] : s.points) {
                if (opt.log_y && y <= 0.0) { pen_down = false; continue; }
                path += (pen_down ? " L " : " M ") + detail::svg_num(tx(x)) + ' ' +
                        detail::svg_num(ty(y));
                pen_down = true;
            }
            if (!path.empty())
                out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
                       "\" stroke-width=\"1.5\"/>\n";
        }
    }

    // Legend.
    double ly = mt + 8;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out += "<rect x=\"" + detail::svg_num(ml + pw - 150) + "\" y=\"" + detail::svg_num(ly) +
               "\" width=\"12\" height=\"12\" fill=\"" + s.color + "\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml + pw - 133) + "\" y=\"" + detail::svg_num(ly + 10) +
               "\" font-size=\"12\" font-family=\"sans-serif\">" + detail::xml_escape(s.label) +
               "</text>\n";
        ly += 18;
    }

    out += "</svg>\n";
    return out;
}

/// Grayscale heatmap of a value grid (row i = x cell, column j = y cell),
/// values mapped to [black, white] over [vmin, vmax].
inline std::string render_heatmap(const std::vector<double>& values, std::size_t nx, std::size_t ny,
                                  const SvgOptions& opt) {
    const double ml = 70, mr = 20, mt = opt.title.empty() ? 20 : 44, mb = 50;
    const double pw = opt.width - ml - mr;
    const double ph = opt.height - mt - mb;

    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (double v : values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (!(vmin < vmax)) vmax = vmin + 1.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           format_int(opt.width) + "\" height=\"" + format_int(opt.height) + "\" viewBox=\"0 0 " +
           format_int(opt.width) + " " + format_int(opt.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        out += "<text x=\"" + detail::svg_num(ml + pw / 2) +
               "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" font-family=\"sans-serif\">" +
               detail::xml_escape(opt.title) + "</text>\n";

    const double cw = pw / static_cast<double>(nx);
    const double ch = ph / static_cast<double>(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = values[i * ny + j];
            const int level = static_cast<int>(std::lround(255.0 * (v - vmin) / (vmax - vmin)));
            const std::string fill = "rgb(" + format_int(level) + ',' + format_int(level) + ',' +
                                     format_int(level) + ')';
            out += "<rect x=\"" + detail::svg_num(ml + cw * static_cast<double>(i)) + "\" y=\"" +
                   detail::svg_num(mt + ph - ch * static_cast<double>(j + 1)) + "\" width=\"" +
                   detail::svg_num(cw + 0.5) + "\" height=\"" + detail::svg_num(ch + 0.5) +
                   "\" fill=\"" + fill + "\"/>\n";
        }
    }
    if (!opt.x_label.empty())
        out += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
               detail::svg_num(mt + ph + 38) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
               detail::xml_escape(opt.x_label) + "</text>\n";
    if (!opt.y_label.empty())
        out += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 " +
               detail::svg_num(mt + ph / 2) + ")\">" + detail::xml_escape(opt.y_label) +
               "</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace drs
