#include "shrinker/errors.hpp"
#include "shrinker/shooting.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace {

using namespace shrinker;

const ShrinkerParams kP{};
const StepperConfig kCfg{};
const double kSqrt2 = std::sqrt(2.0);
constexpr double kPi = std::numbers::pi;

TEST(Trace, RoundSphereHeight) {
    const auto d = trace_profile(2.0, kP, kCfg);
    ASSERT_TRUE(d.reached_first_tangent);
    EXPECT_NEAR(d.x_star, 2.0, 1e-6);
    EXPECT_NEAR(d.z_star, 0.0, 1e-6);
    EXPECT_FALSE(d.x_m.has_value());
    EXPECT_EQ(d.beta_end, BetaEnd::AxisArrival);
    EXPECT_EQ(classify(d), OutcomeTag::NoMin);
    ASSERT_TRUE(d.x_one.has_value());
    EXPECT_NEAR(*d.x_one, kSqrt2, 1e-8);
}

TEST(Trace, SmallHeightHasAFarMinimum) {
    const auto d = trace_profile(1e-3, kP, kCfg);
    ASSERT_TRUE(d.x_m && d.z_m && d.x_star2 && d.z_star2);
    EXPECT_EQ(d.beta_end, BetaEnd::SecondVerticalTangent);
    EXPECT_EQ(classify(d), OutcomeTag::MinThenPositive);
    EXPECT_GE(*d.x_m, d.x_star - 2.0);
    EXPECT_LT(*d.x_m, d.x_star);
    EXPECT_GT(*d.x_star2, 0.0);
    EXPECT_LT(*d.x_star2, kSqrt2);
    EXPECT_GT(*d.z_star2, 0.0);
    // Markers are ordered along the trajectory.
    EXPECT_LT(d.gamma_branch.states.back().s, d.beta_branch.states.back().s);
}

TEST(Trace, FirstZeroCrossingLiesBetweenTwoAndTwoRootTwo) {
    for (double b : {1e-9, 1e-6}) {
        const auto d = trace_profile(b, kP, kCfg);
        ASSERT_TRUE(d.x_zero.has_value()) << "b = " << b;
        EXPECT_GE(*d.x_zero, 2.0);
        EXPECT_LE(*d.x_zero, 2.0 * kSqrt2);
    }
}

TEST(Trace, OutcomesAcrossHeights) {
    EXPECT_EQ(classify(trace_profile(0.5, kP, kCfg)), OutcomeTag::MinThenNegative);
    EXPECT_EQ(classify(trace_profile(2.5, kP, kCfg)), OutcomeTag::NoMin);
    EXPECT_EQ(classify(trace_profile(1e-6, kP, kCfg)), OutcomeTag::MinThenPositive);
}

TEST(Trace, RejectsHeightsOutsideTheRange) {
    EXPECT_THROW(trace_profile(0.0, kP, kCfg), SeedRangeError);
    EXPECT_THROW(trace_profile(-1.0, kP, kCfg), SeedRangeError);
    EXPECT_THROW(trace_profile(4.5, kP, kCfg), SeedRangeError);
}

TEST(Trace, IndeterminateWithoutFirstTangent) {
    BranchDecomposition d;
    EXPECT_EQ(classify(d), OutcomeTag::Indeterminate);
    EXPECT_THROW(assemble_closed_curve(d, 1e-8), ClosureFailure);
}

TEST(Assemble, RoundSphereClosesOnItself) {
    const auto curve = assemble_closed_curve(trace_profile(2.0, kP, kCfg), 1e-8);
    EXPECT_FALSE(curve.loop);
    EXPECT_EQ(axis_touchpoints(curve, 1e-9), 2);
    EXPECT_NEAR(curve.points.back().z, -2.0, 1e-6);
    EXPECT_TRUE(count_self_intersections(curve).empty());
    for (const auto& p : curve.points) {
        EXPECT_NEAR(std::hypot(p.x, p.z), 2.0, 1e-6);
    }
}

TEST(Assemble, OpenJunctionIsRefused) {
    EXPECT_THROW(assemble_closed_curve(trace_profile(0.5, kP, kCfg), 1e-8), ClosureFailure);
}

class SphereSearch : public ::testing::Test {
protected:
    static void SetUpTestSuite() { report_ = new ShootReport(find_sphere_height(kP, kCfg)); }
    static void TearDownTestSuite() {
        delete report_;
        report_ = nullptr;
    }
    static ShootReport* report_;
};

ShootReport* SphereSearch::report_ = nullptr;

TEST_F(SphereSearch, RootAndClosure) {
    const auto& r = *report_;
    EXPECT_EQ(r.target, ShootTarget::Sphere);
    EXPECT_GT(r.root, 0.0);
    EXPECT_LT(r.root, 2.0);
    EXPECT_LE(r.closure_residual, 1e-8);
    ASSERT_TRUE(r.decomposition.has_value());
    const auto& d = *r.decomposition;
    ASSERT_TRUE(d.x_star2 && d.z_star2);
    EXPECT_LE(std::abs(*d.z_star2), 1e-8);
    EXPECT_GT(*d.x_star2, 0.0);
    EXPECT_LT(*d.x_star2, kSqrt2);
    EXPECT_FALSE(r.bracket_history.empty());
    EXPECT_GT(r.iterations, 0);
}

TEST_F(SphereSearch, ProfileTouchesTheAxisTwice) {
    const auto& c = report_->closed_curve;
    EXPECT_EQ(axis_touchpoints(c, 1e-9), 2);
    EXPECT_EQ(c.points.front().x, 0.0);
    EXPECT_NEAR(c.points.front().z, report_->root, 1e-15);
    EXPECT_NEAR(c.points.back().z, -report_->root, 1e-15);
}

TEST_F(SphereSearch, ProfileIsSymmetricUnderReflection) {
    const auto& p = report_->closed_curve.points;
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(p[i].x, p[p.size() - 1 - i].x, 1e-12);
        EXPECT_NEAR(p[i].z, -p[p.size() - 1 - i].z, 1e-12);
    }
}

TEST_F(SphereSearch, CrossingsAreTransversalAndPaired) {
    const auto& xs = report_->self_intersections;
    EXPECT_GE(xs.size(), 2u);
    for (const auto& c : xs) {
        EXPECT_GE(c.angle, 1e-2);
        const bool on_axis = std::abs(c.z) < 1e-6;
        const bool paired = std::any_of(xs.begin(), xs.end(), [&](const Crossing& o) {
            return std::abs(o.x - c.x) < 1e-6 && std::abs(o.z + c.z) < 1e-6;
        });
        EXPECT_TRUE(on_axis || paired) << "crossing at (" << c.x << ", " << c.z << ")";
    }
}

TEST(SphereBracket, EndpointsMustDisagree) {
    EXPECT_THROW(find_sphere_height(kP, kCfg, {0.5, 1.0}), BracketInvalid);
    EXPECT_THROW(find_sphere_height(kP, kCfg, {1e-3, 0.2}), BracketInvalid);
    EXPECT_THROW(find_sphere_height(kP, kCfg, {1.0, 0.5}), BracketInvalid);
}

TEST(SphereSweep, ClosingHeightsFormOneInterval) {
    const auto sweep = sweep_predicate(log_spaced(1e-6, 2.0, 56), kP, kCfg);
    ASSERT_EQ(sweep.tags.size(), 56u);
    EXPECT_TRUE(sweep.single_interval);
    ASSERT_EQ(sweep.transitions.size(), 1u);
    const auto report = find_sphere_height(kP, kCfg);
    EXPECT_GE(report.root, sweep.transitions[0].first);
    EXPECT_LE(report.root, sweep.transitions[0].second);
}

TEST(SphereSweep, LogSpacing) {
    const auto v = log_spaced(1e-4, 1.0, 5);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_DOUBLE_EQ(v[0], 1e-4);
    EXPECT_NEAR(v[1], 1e-3, 1e-15);
    EXPECT_DOUBLE_EQ(v[4], 1.0);
}

TEST(Torus, RadiusAndShape) {
    const auto r = find_torus_radius(kP, kCfg);
    EXPECT_EQ(r.target, ShootTarget::Torus);
    EXPECT_GT(r.root, 3.0);
    EXPECT_LT(r.root, 3.5);
    EXPECT_LE(r.closure_residual, 1e-8);
    const auto& c = r.closed_curve;
    EXPECT_TRUE(c.loop);
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& p : c.points) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(lo, kSqrt2);
    EXPECT_GT(hi, kSqrt2);
    EXPECT_TRUE(r.self_intersections.empty());
    EXPECT_NEAR(c.points.front().x, c.points.back().x, 1e-8);
    EXPECT_NEAR(c.points.front().z, c.points.back().z, 1e-8);

    // Count tangent directions along one period from the sampled angles.
    int vertical = 0;
    int horizontal = 0;
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const double a = c.points[i - 1].theta;
        const double b = c.points[i].theta;
        vertical += std::floor(a / kPi - 0.5) != std::floor(b / kPi - 0.5);
        horizontal += std::floor(a / kPi) != std::floor(b / kPi);
    }
    // The closing point repeats the vertical tangent at the start.
    EXPECT_EQ(vertical, 2);
    EXPECT_EQ(horizontal, 2);
}

TEST(Torus, ShotFromInsideTheBracket) {
    const auto lo = shoot_torus(3.0, kP, kCfg);
    const auto hi = shoot_torus(3.5, kP, kCfg);
    ASSERT_TRUE(lo.height && hi.height);
    EXPECT_LT(*lo.height * *hi.height, 0.0);
    EXPECT_THROW(shoot_torus(0.0, kP, kCfg), DomainError);
    EXPECT_THROW(find_torus_radius(kP, kCfg, {3.0, 3.1}), BracketInvalid);
}

TEST(Names, EnumStrings) {
    EXPECT_EQ(to_string(OutcomeTag::MinThenPositive), "MinThenPositive");
    EXPECT_EQ(to_string(BetaEnd::AxisArrival), "AxisArrival");
    EXPECT_EQ(to_string(ShootTarget::Torus), "torus");
}

}  // namespace
