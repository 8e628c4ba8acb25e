#pragma once

#include "shrinker/profile_ode.hpp"

#include <string_view>
#include <vector>

namespace shrinker {

enum class Branch { Gamma, Beta, GammaRef, BetaRef, Torus };

std::string_view to_string(Branch branch);
Branch branch_from_string(std::string_view name);

struct CurvePoint {
    double s = 0.0;
    double x = 0.0;
    double z = 0.0;
    double theta = 0.0;
    Branch branch = Branch::Gamma;
};

/// A profile curve as an ordered polyline.  For a loop (torus profile) the last
/// point repeats the first.
struct ClosedCurve {
    std::vector<CurvePoint> points;
    bool loop = false;

    double length() const { return points.empty() ? 0.0 : points.back().s - points.front().s; }
};

struct Crossing {
    double x = 0.0;
    double z = 0.0;
    double s_first = 0.0;
    double s_second = 0.0;
    /// Angle between the two segments, in (0, pi/2].
    double angle = 0.0;
};

std::vector<CurvePoint> tag_states(const std::vector<PlanarState>& states, Branch branch);

/// Reflects `half` across the x-axis about its final point and appends the
/// reflected copy in reverse order, so the result runs from half.front() through
/// the junction and back to the mirror image of half.front().  Reflected points
/// keep tangent continuity: theta' = 2 theta_J - theta, s' = 2 s_J - s.
ClosedCurve mirror_about_end(const std::vector<CurvePoint>& half, bool loop);

/// Transversal crossings between non-adjacent segments.
std::vector<Crossing> count_self_intersections(const ClosedCurve& curve);

/// Number of curve points within `tol` of the rotation axis.
int axis_touchpoints(const ClosedCurve& curve, double tol);

std::vector<PlanarState> to_states(const ClosedCurve& curve);

}  // namespace shrinker
