#include "shrinker/svg_plot.hpp"

#include "shrinker/curve_io.hpp"
#include "shrinker/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace shrinker {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    // Avoid "-0.000" so equal pictures print equal text.
    std::string s = buf;
    if (s == "-0.000") {
        s = "0.000";
    }
    return s;
}

std::string_view marker_class(MarkerKind k) {
    switch (k) {
    case MarkerKind::VerticalTangent: return "vt";
    case MarkerKind::HorizontalTangent: return "ht";
    case MarkerKind::Crossing: return "cross";
    case MarkerKind::AxisPoint: return "axis";
    }
    return "vt";
}

}  // namespace

std::string render_svg(const std::vector<PlotCurve>& curves, const std::vector<PlotMarker>& markers,
                       const PlotOptions& opts) {
    if (curves.empty()) {
        throw DomainError("render_svg: nothing to plot");
    }
    if (opts.width <= 2 * opts.padding || opts.height <= 2 * opts.padding) {
        throw DomainError("render_svg: plot smaller than its padding");
    }

    // The axis x = 0 is always in view.
    double x_lo = 0.0;
    double x_hi = -std::numeric_limits<double>::infinity();
    double z_lo = std::numeric_limits<double>::infinity();
    double z_hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            x_lo = std::min(x_lo, p.x);
            x_hi = std::max(x_hi, p.x);
            z_lo = std::min(z_lo, p.z);
            z_hi = std::max(z_hi, p.z);
        }
    }
    if (!(x_hi > x_lo)) {
        x_hi = x_lo + 1.0;
    }
    if (!(z_hi > z_lo)) {
        z_lo -= 0.5;
        z_hi += 0.5;
    }
    const double inner_w = opts.width - 2.0 * opts.padding;
    const double inner_h = opts.height - 2.0 * opts.padding;
    const double scale = std::min(inner_w / (x_hi - x_lo), inner_h / (z_hi - z_lo));
    const double off_x = opts.padding + 0.5 * (inner_w - scale * (x_hi - x_lo));
    const double off_z = opts.padding + 0.5 * (inner_h - scale * (z_hi - z_lo));
    auto px = [&](double x) { return off_x + scale * (x - x_lo); };
    auto pz = [&](double z) { return opts.height - (off_z + scale * (z - z_lo)); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) +
           "\" height=\"" + std::to_string(opts.height) + "\" viewBox=\"0 0 " +
           std::to_string(opts.width) + " " + std::to_string(opts.height) + "\">\n";
    if (!opts.title.empty()) {
        svg += "<title>" + opts.title + "</title>\n";
    }
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line class=\"z-axis\" x1=\"" + num(px(0.0)) + "\" y1=\"0\" x2=\"" + num(px(0.0)) +
           "\" y2=\"" + std::to_string(opts.height) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (z_lo <= 0.0 && z_hi >= 0.0) {
        svg += "<line class=\"x-axis\" x1=\"0\" y1=\"" + num(pz(0.0)) + "\" x2=\"" +
               std::to_string(opts.width) + "\" y2=\"" + num(pz(0.0)) +
               "\" stroke=\"#999999\" stroke-width=\"0.5\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (const auto& c : curves) {
        svg += "<polyline class=\"profile\" fill=\"none\" stroke=\"" + c.stroke +
               "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& p : c.points) {
            if (!first) {
                svg += ' ';
            }
            first = false;
            svg += num(px(p.x));
            svg += ',';
            svg += num(pz(p.z));
        }
        svg += "\"/>\n";
    }
    for (const auto& m : markers) {
        const std::string cls(marker_class(m.kind));
        const std::string cx = num(px(m.x));
        const std::string cy = num(pz(m.z));
        if (m.kind == MarkerKind::Crossing) {
            svg += "<rect class=\"" + cls + "\" x=\"" + num(px(m.x) - 3.0) + "\" y=\"" +
                   num(pz(m.z) - 3.0) + "\" width=\"6\" height=\"6\" fill=\"#c0392b\"/>\n";
        } else {
            const char* fill = m.kind == MarkerKind::HorizontalTangent ? "#27ae60"
                               : m.kind == MarkerKind::AxisPoint       ? "black"
                                                                       : "#e67e22";
            svg += "<circle class=\"" + cls + "\" cx=\"" + cx + "\" cy=\"" + cy +
                   "\" r=\"3\" fill=\"" + fill + "\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

void write_svg_plot(const std::vector<PlotCurve>& curves, const std::vector<PlotMarker>& markers,
                    const PlotOptions& opts, const std::filesystem::path& path) {
    write_file_atomic(path, render_svg(curves, markers, opts));
}

std::vector<PlotMarker> curve_markers(const ClosedCurve& curve,
                                      const std::vector<Crossing>& crossings) {
    std::vector<PlotMarker> out;
    const auto& pts = curve.points;
    const double half_pi = 0.5 * std::numbers::pi;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        // A tangent point is where theta crosses a multiple of pi/2.
        const double a = pts[i].theta / half_pi;
        const double b = pts[i + 1].theta / half_pi;
        const double k = std::floor(std::max(a, b));
        const bool on_axis = pts[i].x <= 1e-9 || pts[i + 1].x <= 1e-9;
        if (!on_axis && std::min(a, b) < k && k <= std::max(a, b)) {
            const double t = (k - a) / (b - a);
            const double x = pts[i].x + t * (pts[i + 1].x - pts[i].x);
            const double z = pts[i].z + t * (pts[i + 1].z - pts[i].z);
            const bool vertical = static_cast<long long>(std::abs(k)) % 2 == 1;
            out.push_back({x, z, vertical ? MarkerKind::VerticalTangent
                                          : MarkerKind::HorizontalTangent});
        }
    }
    for (const auto& p : pts) {
        if (p.x <= 1e-9) {
            out.push_back({p.x, p.z, MarkerKind::AxisPoint});
        }
    }
    for (const auto& c : crossings) {
        out.push_back({c.x, c.z, MarkerKind::Crossing});
    }
    return out;
}

}  // namespace shrinker
