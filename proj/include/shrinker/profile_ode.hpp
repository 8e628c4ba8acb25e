#pragma once

#include <span>

namespace shrinker {

/// Parameters of the rotationally symmetric shrinker equation.
///
/// The profile curve lives in the (x, z) half-plane and is rotated about the
/// z-axis.  `n` is the dimension of the rotating sphere factor; it only enters
/// through the singular coefficient (n - 1) / x.
struct ShrinkerParams {
    int n = 2;
    double axis_epsilon = 1e-12;

    void validate() const;

    double singular_coefficient() const { return static_cast<double>(n - 1); }
    /// Radius of the cylinder solution, sqrt(2 (n - 1)).
    double cylinder_radius() const;
    /// Radius of the round sphere solution, sqrt(2 n).
    double sphere_radius() const;
};

/// A point on a profile curve in arc-length form.  theta is the tangent angle
/// (tan theta = dz/dx) and is never reduced modulo 2 pi along a trajectory.
struct PlanarState {
    double x = 0.0;
    double z = 0.0;
    double theta = 0.0;
    double s = 0.0;
};

struct ArcDerivative {
    double dx = 0.0;
    double dz = 0.0;
    double dtheta = 0.0;
};

struct HigherDerivatives {
    double third = 0.0;
    double fourth = 0.0;
};

/// gamma'' for the curve written as a graph z = gamma(x).
double graph_x_rhs(double x, double g, double gp, const ShrinkerParams& params);

/// alpha'' for the curve written as a graph x = alpha(z).
double graph_z_rhs(double z, double a, double ap, const ShrinkerParams& params);

/// Curvature form: (dx/ds, dz/ds, dtheta/ds).  Regular at vertical tangents.
ArcDerivative arclength_rhs(const PlanarState& state, const ShrinkerParams& params);

/// gamma''' and gamma'''' obtained by differentiating the graph equation.
/// `gpp` must agree with graph_x_rhs to `consistency_tol` (relative to
/// max(1, |gpp|)); `gppp` is used as given in the fourth-derivative formula.
HigherDerivatives third_fourth_derivatives(double x, double g, double gp, double gpp,
                                           double gppp, const ShrinkerParams& params,
                                           double consistency_tol = 1e-8);

/// Max |dtheta/ds - arclength_rhs| with dtheta/ds taken by centred finite
/// differences.  States with x <= axis_epsilon are skipped as stencil points.
/// Returns +inf if fewer than three usable states or any spacing is degenerate.
double ode_residual(std::span<const PlanarState> curve, const ShrinkerParams& params);

}  // namespace shrinker
