#include "shrinker/errors.hpp"
#include "shrinker/integrator.hpp"
#include "shrinker/profile_ode.hpp"
#include "shrinker/series_seed.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace {

using namespace shrinker;

const ShrinkerParams kP{};
const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

// Circle of radius 2: gamma(x) = sqrt(4 - x^2) and its derivatives.
double circle_gp(double x) { return -x / std::sqrt(4.0 - x * x); }
double circle_gpp(double x) { return -4.0 / std::pow(4.0 - x * x, 1.5); }
double circle_gppp(double x) { return -12.0 * x / std::pow(4.0 - x * x, 2.5); }
double circle_gpppp(double x) {
    return -12.0 / std::pow(4.0 - x * x, 2.5) - 60.0 * x * x / std::pow(4.0 - x * x, 3.5);
}

TEST(Params, RejectsLineCaseAndBadEpsilon) {
    ShrinkerParams p;
    p.n = 1;
    EXPECT_THROW(p.validate(), DomainError);
    p.n = 2;
    p.axis_epsilon = 0.0;
    EXPECT_THROW(p.validate(), DomainError);
    EXPECT_DOUBLE_EQ(ShrinkerParams{}.cylinder_radius(), kSqrt2);
    EXPECT_DOUBLE_EQ(ShrinkerParams{3}.cylinder_radius(), 2.0);
    EXPECT_DOUBLE_EQ(ShrinkerParams{}.sphere_radius(), 2.0);
}

TEST(GraphX, DirectArithmetic) {
    EXPECT_DOUBLE_EQ(graph_x_rhs(2.0, 0.0, -1.0, kP), -1.0);
}

TEST(GraphX, RoundSphere) {
    const double x = 1.0;
    EXPECT_NEAR(graph_x_rhs(x, std::sqrt(3.0), circle_gp(x), kP), -4.0 / (3.0 * std::sqrt(3.0)),
                1e-15);
    for (double t : {0.3, 0.9, 1.7, 1.95}) {
        EXPECT_NEAR(graph_x_rhs(t, std::sqrt(4.0 - t * t), circle_gp(t), kP), circle_gpp(t),
                    1e-12 * std::abs(circle_gpp(t)));
    }
}

TEST(GraphX, RejectsPointsOnTheAxis) {
    EXPECT_THROW(graph_x_rhs(0.0, 1.0, 0.0, kP), DomainError);
    EXPECT_THROW(graph_x_rhs(1e-13, 1.0, 0.0, kP), DomainError);
}

TEST(GraphX, LaunchCurvatureIsMinusQuarterHeight) {
    // On the series the graph equation tends to gamma''(0) = -b/4.
    const double b = 1.3;
    const auto seed = make_seed(b, kP);
    const double x = 1e-4;
    const auto v = eval_seed(seed, x);
    EXPECT_NEAR(graph_x_rhs(x, v.g, v.gp, kP), -b / 4.0, 1e-7);
    EXPECT_NEAR(v.gpp, -b / 4.0, 1e-7);
}

TEST(GraphZ, CylinderIsStationary) {
    for (double z : {-3.0, 0.0, 2.5}) {
        EXPECT_NEAR(graph_z_rhs(z, kSqrt2, 0.0, kP), 0.0, 1e-15);
    }
    EXPECT_NEAR(graph_z_rhs(0.0, 2.0, 0.0, ShrinkerParams{3}), 0.0, 1e-15);
}

TEST(GraphZ, ZeroSlopeVanishesOnlyAtCylinderRadius) {
    for (int n : {2, 3, 5}) {
        const ShrinkerParams p{n};
        const double r = p.cylinder_radius();
        EXPECT_NEAR(graph_z_rhs(0.7, r, 0.0, p), 0.0, 1e-14);
        EXPECT_GT(graph_z_rhs(0.7, 0.9 * r, 0.0, p), 0.0);
        EXPECT_LT(graph_z_rhs(0.7, 1.1 * r, 0.0, p), 0.0);
    }
}

TEST(GraphZ, ConcaveDownBeyondCylinder) {
    const double xs = 3.2;
    EXPECT_DOUBLE_EQ(graph_z_rhs(-1.0, xs, 0.0, kP), 1.0 / xs - xs / 2.0);
    EXPECT_LT(graph_z_rhs(-1.0, xs, 0.0, kP), 0.0);
}

TEST(GraphZ, RoundSphere) {
    const double z = 1.0;
    EXPECT_NEAR(graph_z_rhs(z, std::sqrt(3.0), circle_gp(z), kP), -4.0 / (3.0 * std::sqrt(3.0)),
                1e-15);
    EXPECT_THROW(graph_z_rhs(0.0, 0.0, 0.0, kP), DomainError);
    EXPECT_THROW(graph_z_rhs(0.0, -1.0, 0.0, kP), DomainError);
}

TEST(ArcLength, CylinderEquilibrium) {
    const auto d = arclength_rhs({kSqrt2, 0.4, kPi / 2, 0.0}, kP);
    EXPECT_NEAR(d.dx, 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(d.dz, 1.0);
    EXPECT_NEAR(d.dtheta, 0.0, 1e-16);
}

TEST(ArcLength, RoundSphereHasCurvatureOneHalf) {
    for (double phi = 0.05; phi < kPi; phi += 0.1) {
        const PlanarState st{2.0 * std::sin(phi), 2.0 * std::cos(phi), -phi, 0.0};
        const auto d = arclength_rhs(st, kP);
        EXPECT_NEAR(d.dtheta, -0.5, 1e-14) << "phi = " << phi;
        EXPECT_NEAR(d.dx, std::cos(phi), 1e-15);
        EXPECT_NEAR(d.dz, -std::sin(phi), 1e-15);
    }
}

TEST(ArcLength, HorizontalAtCylinderRadius) {
    for (double z0 : {-2.0, -0.5, 0.0, 1.25, 3.0}) {
        EXPECT_EQ(arclength_rhs({kSqrt2, z0, 0.0, 0.0}, kP).dtheta, -z0 / 2.0);
    }
    EXPECT_THROW(arclength_rhs({0.0, 1.0, 0.0, 0.0}, kP), DomainError);
}

TEST(ArcLength, AgreesWithBothGraphForms) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ux(0.05, 6.0);
    std::uniform_real_distribution<double> uz(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(-5.0, 5.0);
    for (int n : {2, 3}) {
        const ShrinkerParams p{n};
        for (int i = 0; i < 2000; ++i) {
            const PlanarState st{ux(rng), uz(rng), ut(rng), 0.0};
            const double c = std::cos(st.theta);
            const double s = std::sin(st.theta);
            const double k = arclength_rhs(st, p).dtheta;
            if (std::abs(c) > 1e-3) {
                // kappa = gamma'' cos^3(theta), whatever the direction of travel.
                const double via_x = graph_x_rhs(st.x, st.z, s / c, p) * c * c * c;
                EXPECT_NEAR(k, via_x, 1e-10 * std::max(1.0, std::abs(k)));
            }
            if (std::abs(s) > 1e-3) {
                // kappa = -alpha'' sin^3(theta) for x = alpha(z).
                const double via_z = -graph_z_rhs(st.z, st.x, c / s, p) * s * s * s;
                EXPECT_NEAR(k, via_z, 1e-10 * std::max(1.0, std::abs(k)));
            }
        }
    }
}

TEST(ArcLength, ReversalFlipsTheTurningRate) {
    const PlanarState st{1.3, -0.4, 0.8, 0.0};
    const auto fwd = arclength_rhs(st, kP);
    const auto back = arclength_rhs(reversed(st), kP);
    EXPECT_NEAR(back.dx, -fwd.dx, 1e-15);
    EXPECT_NEAR(back.dz, -fwd.dz, 1e-15);
    EXPECT_NEAR(back.dtheta, -fwd.dtheta, 1e-15);
}

TEST(HigherDerivatives, RoundSphereMatchesAnalytic) {
    for (double x : {0.5, 1.0, 1.5}) {
        const double g = std::sqrt(4.0 - x * x);
        const auto h = third_fourth_derivatives(x, g, circle_gp(x), circle_gpp(x), circle_gppp(x),
                                                kP);
        EXPECT_NEAR(h.third, circle_gppp(x), 1e-12 * std::abs(circle_gppp(x)));
        EXPECT_NEAR(h.fourth, circle_gpppp(x), 1e-12 * std::abs(circle_gpppp(x)));
    }
    const auto at_one = third_fourth_derivatives(1.0, std::sqrt(3.0), circle_gp(1.0),
                                                 circle_gpp(1.0), circle_gppp(1.0), kP);
    EXPECT_NEAR(at_one.third, -12.0 / std::pow(3.0, 2.5), 1e-14);
    EXPECT_NEAR(at_one.fourth, -12.0 / std::pow(3.0, 2.5) - 60.0 / std::pow(3.0, 3.5), 1e-13);
}

TEST(HigherDerivatives, RejectsInconsistentSecondDerivative) {
    EXPECT_THROW(third_fourth_derivatives(1.0, std::sqrt(3.0), circle_gp(1.0), 0.0, 0.0, kP),
                 ConsistencyError);
    EXPECT_THROW(third_fourth_derivatives(0.0, 1.0, 0.0, -0.25, 0.0, kP), DomainError);
}

TEST(HigherDerivatives, LaunchHasVanishingThirdAndNegativeFourth) {
    for (double b : {1e-3, 0.5, 1.0, 1.9}) {
        const auto seed = make_seed(b, kP);
        double prev_third = 0.0;
        for (double x : {1e-2, 1e-3}) {
            const auto v = eval_seed(seed, x);
            const double gpp = graph_x_rhs(x, v.g, v.gp, kP);
            const auto h0 = third_fourth_derivatives(x, v.g, v.gp, gpp, 0.0, kP);
            const auto h = third_fourth_derivatives(x, v.g, v.gp, gpp, h0.third, kP);
            EXPECT_LT(std::abs(h.third), 0.05 * b + 1e-12);
            if (prev_third != 0.0) {
                EXPECT_LT(std::abs(h.third), std::abs(prev_third));
            }
            prev_third = h.third;
            EXPECT_LT(h.fourth, 0.0) << "b = " << b;
        }
    }
}

TEST(HigherDerivatives, ThirdNegativeAtInflectionOutsideCylinder) {
    for (double x : {kSqrt2, 2.0, 4.0}) {
        for (double gp : {-0.1, -1.0, -5.0}) {
            // Choose g so that gamma'' = 0: g = 2 (x/2 - 1/x) gp.
            const double g = 2.0 * (0.5 * x - 1.0 / x) * gp;
            const auto h = third_fourth_derivatives(x, g, gp, 0.0, 0.0, kP);
            EXPECT_LT(h.third, 0.0) << "x = " << x << " gp = " << gp;
        }
    }
}

TEST(Residual, CircleSample) {
    std::vector<PlanarState> pts;
    for (double s = 0.1; s < 6.0; s += 1e-3) {
        const double phi = s / 2.0;
        pts.push_back({2.0 * std::sin(phi), 2.0 * std::cos(phi), -phi, s});
    }
    EXPECT_LE(ode_residual(pts, kP), 1e-5);
}

TEST(Residual, CylinderSegment) {
    std::vector<PlanarState> pts;
    for (int i = 0; i < 200; ++i) {
        pts.push_back({kSqrt2, 0.01 * i, kPi / 2, 0.01 * i});
    }
    EXPECT_LE(ode_residual(pts, kP), 1e-12);
}

TEST(Residual, DegenerateInput) {
    std::vector<PlanarState> two{{1.0, 0.0, 0.0, 0.0}, {1.1, 0.0, 0.0, 0.1}};
    EXPECT_TRUE(std::isinf(ode_residual(two, kP)));
    std::vector<PlanarState> repeated{{1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0},
                                      {1.1, 0.0, 0.0, 0.1}};
    EXPECT_TRUE(std::isinf(ode_residual(repeated, kP)));
}

TEST(Residual, IntegratorOutputIsLimitedByDifferencing) {
    const auto seed = make_seed(0.5, kP);
    const auto traj = integrate(launch_state(seed), kP, StepperConfig{}, {EventKind::VerticalTangent});
    const double coarse = ode_residual(resample_uniform(traj, 2e-3), kP);
    const double fine = ode_residual(resample_uniform(traj, 1e-3), kP);
    EXPECT_LE(fine, 1e-4);
    // Second-order differencing: halving the spacing divides the residual by about 4.
    EXPECT_NEAR(fine / coarse, 0.25, 0.05);
}

}  // namespace
