#pragma once

#include "shrinker/closed_curve.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace shrinker {

struct PlotCurve {
    std::vector<CurvePoint> points;
    std::string stroke = "#1f4e9c";
};

enum class MarkerKind { VerticalTangent, HorizontalTangent, Crossing, AxisPoint };

struct PlotMarker {
    double x = 0.0;
    double z = 0.0;
    MarkerKind kind = MarkerKind::VerticalTangent;
};

struct PlotOptions {
    int width = 640;
    int height = 640;
    /// Blank border around the data, in pixels.
    int padding = 32;
    std::string title;
};

/// SVG of the (x, z) half-plane: the rotation axis, the x-axis, each curve as a
/// polyline and a small glyph per marker.  Equal scales on both axes.
/// Output depends only on the arguments.
std::string render_svg(const std::vector<PlotCurve>& curves, const std::vector<PlotMarker>& markers,
                       const PlotOptions& opts);

void write_svg_plot(const std::vector<PlotCurve>& curves, const std::vector<PlotMarker>& markers,
                    const PlotOptions& opts, const std::filesystem::path& path);

/// Markers at the tangent points of a curve (read off theta) and at crossings.
std::vector<PlotMarker> curve_markers(const ClosedCurve& curve,
                                      const std::vector<Crossing>& crossings);

}  // namespace shrinker
