#include "shrinker/profile_ode.hpp"

#include "shrinker/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace shrinker {

void ShrinkerParams::validate() const {
    if (n < 2) {
        throw DomainError("dimension n must be at least 2, got " + std::to_string(n));
    }
    if (!(axis_epsilon > 0.0)) {
        throw DomainError("axis_epsilon must be positive");
    }
}

double ShrinkerParams::cylinder_radius() const {
    return std::sqrt(2.0 * singular_coefficient());
}

double ShrinkerParams::sphere_radius() const {
    return std::sqrt(2.0 * static_cast<double>(n));
}

namespace {

void require_off_axis(double x, const ShrinkerParams& params, const char* where) {
    if (!(x > params.axis_epsilon)) {
        throw DomainError(std::string(where) + ": x = " + std::to_string(x) +
                          " is within axis_epsilon of the rotation axis");
    }
}

}  // namespace

double graph_x_rhs(double x, double g, double gp, const ShrinkerParams& params) {
    require_off_axis(x, params, "graph_x_rhs");
    const double c = params.singular_coefficient();
    return (1.0 + gp * gp) * ((0.5 * x - c / x) * gp - 0.5 * g);
}

double graph_z_rhs(double z, double a, double ap, const ShrinkerParams& params) {
    if (!(a > 0.0)) {
        throw DomainError("graph_z_rhs: alpha must be positive");
    }
    const double c = params.singular_coefficient();
    return (1.0 + ap * ap) * ((c / a - 0.5 * a) + 0.5 * z * ap);
}

ArcDerivative arclength_rhs(const PlanarState& state, const ShrinkerParams& params) {
    require_off_axis(state.x, params, "arclength_rhs");
    const double c = params.singular_coefficient();
    const double cs = std::cos(state.theta);
    const double sn = std::sin(state.theta);
    return {cs, sn, (0.5 * state.x - c / state.x) * sn - 0.5 * state.z * cs};
}

HigherDerivatives third_fourth_derivatives(double x, double g, double gp, double gpp,
                                           double gppp, const ShrinkerParams& params,
                                           double consistency_tol) {
    const double expected = graph_x_rhs(x, g, gp, params);
    if (std::abs(gpp - expected) > consistency_tol * std::max(1.0, std::abs(expected))) {
        throw ConsistencyError("third_fourth_derivatives: gamma'' inconsistent with the ODE");
    }
    const double c = params.singular_coefficient();
    const double w = 1.0 + gp * gp;
    const double drift = 0.5 * x - c / x;

    const double third =
        w * (2.0 * gp * gpp * gpp / (w * w) + drift * gpp + c / (x * x) * gp);

    const double fourth =
        w * ((6.0 * gp * gpp * gppp + 2.0 * gpp * gpp * gpp) / (w * w) -
             8.0 * gp * gp * gpp * gpp * gpp / (w * w * w) + drift * gppp +
             (0.5 + 2.0 * c / (x * x)) * gpp - 2.0 * c / (x * x * x) * gp);
    return {third, fourth};
}

double ode_residual(std::span<const PlanarState> curve, const ShrinkerParams& params) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (curve.size() < 3) {
        return inf;
    }
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const auto& a = curve[i - 1];
        const auto& m = curve[i];
        const auto& b = curve[i + 1];
        if (a.x <= params.axis_epsilon || m.x <= params.axis_epsilon ||
            b.x <= params.axis_epsilon) {
            continue;
        }
        const double h1 = m.s - a.s;
        const double h2 = b.s - m.s;
        if (!(h1 > 0.0) || !(h2 > 0.0)) {
            return inf;
        }
        // Second-order derivative on a non-uniform stencil.
        const double fd = (b.theta - m.theta) * h1 / (h2 * (h1 + h2)) +
                          (m.theta - a.theta) * h2 / (h1 * (h1 + h2));
        worst = std::max(worst, std::abs(fd - arclength_rhs(m, params).dtheta));
        ++used;
    }
    return used == 0 ? inf : worst;
}

}  // namespace shrinker
