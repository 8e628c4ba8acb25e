#include "shrinker/errors.hpp"
#include "shrinker/verify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace {

using namespace shrinker;

const ShrinkerParams kP{};
const StepperConfig kCfg{};

const BoundReport* find(const std::vector<BoundReport>& rs, std::string_view id) {
    const auto it =
        std::find_if(rs.begin(), rs.end(), [&](const BoundReport& r) { return r.claim_id == id; });
    return it == rs.end() ? nullptr : &*it;
}

TEST(Registry, IdsAreUniqueAndDescribed) {
    const auto reg = claim_registry();
    EXPECT_EQ(reg.size(), 27u);
    std::set<std::string_view> seen;
    for (const auto& c : reg) {
        EXPECT_TRUE(seen.insert(c.id).second) << c.id;
        EXPECT_FALSE(c.statement.empty()) << c.id;
        EXPECT_TRUE(is_registered(c.id));
    }
    EXPECT_FALSE(is_registered("first.nonexistent"));
}

TEST(Registry, ThresholdValue) {
    const double expected = std::sqrt(2.0 / (std::numbers::pi * std::exp(25.0)));
    EXPECT_DOUBLE_EQ(small_height_threshold(), expected);
    EXPECT_GT(small_height_threshold(), 2.9e-6);
    EXPECT_LT(small_height_threshold(), 3.0e-6);
}

class TinyHeight : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        reports_ = new std::vector<BoundReport>(verify_height(1e-6, kP, kCfg));
    }
    static void TearDownTestSuite() {
        delete reports_;
        reports_ = nullptr;
    }
    static std::vector<BoundReport>* reports_;
};

std::vector<BoundReport>* TinyHeight::reports_ = nullptr;

TEST_F(TinyHeight, EveryApplicableClaimHolds) {
    ASSERT_FALSE(reports_->empty());
    for (const auto& r : *reports_) {
        EXPECT_TRUE(is_registered(r.claim_id)) << r.claim_id;
        EXPECT_EQ(r.b, 1e-6);
        if (r.applicable()) {
            EXPECT_TRUE(r.pass()) << r.claim_id << " margin " << r.margin << " " << r.note;
        }
    }
}

TEST_F(TinyHeight, EveryClaimIsReported) {
    for (const auto& c : claim_registry()) {
        EXPECT_NE(find(*reports_, c.id), nullptr) << c.id;
    }
}

TEST_F(TinyHeight, SmallHeightEstimatesApply) {
    for (auto id : {"small.x_star_lower", "small.z_star_lower", "small.z_star_upper",
                    "small.x_zero_interval", "small.x_star_beyond"}) {
        const auto* r = find(*reports_, id);
        ASSERT_NE(r, nullptr) << id;
        EXPECT_TRUE(r->applicable()) << id;
    }
}

TEST_F(TinyHeight, ReportsInRegistryOrder) {
    std::vector<std::size_t> order;
    const auto reg = claim_registry();
    for (const auto& r : *reports_) {
        const auto it = std::find_if(reg.begin(), reg.end(),
                                     [&](const ClaimInfo& c) { return c.id == r.claim_id; });
        order.push_back(static_cast<std::size_t>(it - reg.begin()));
    }
    EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
}

TEST_F(TinyHeight, Deterministic) {
    const auto again = verify_height(1e-6, kP, kCfg);
    ASSERT_EQ(again.size(), reports_->size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        EXPECT_EQ(again[i].claim_id, (*reports_)[i].claim_id);
        EXPECT_EQ(again[i].margin, (*reports_)[i].margin);
        EXPECT_EQ(again[i].verdict, (*reports_)[i].verdict);
    }
}

TEST(FirstBranch, RoundSphereIsTheBoundaryCase) {
    const auto rs = check_first_branch(trace_profile(2.0, kP, kCfg));
    const auto* z = find(rs, "first.z_star_negative");
    ASSERT_NE(z, nullptr);
    EXPECT_EQ(z->verdict, Verdict::Fail);
    EXPECT_TRUE(z->expected_fail);
    EXPECT_TRUE(find(rs, "first.x_star_cylinder")->pass());
    EXPECT_TRUE(find(rs, "first.concavity")->pass());
}

TEST(FirstBranch, AboveTheRoundSphereTheSignClaimDoesNotApply) {
    const auto rs = check_first_branch(trace_profile(2.5, kP, kCfg));
    EXPECT_EQ(find(rs, "first.z_star_negative")->verdict, Verdict::NotApplicable);
}

TEST(FirstBranch, DetectsAViolation) {
    auto d = trace_profile(0.5, kP, kCfg);
    d.x_star = 1.0;
    const auto rs = check_first_branch(d);
    const auto* r = find(rs, "first.x_star_cylinder");
    EXPECT_EQ(r->verdict, Verdict::Fail);
    EXPECT_LT(r->margin, 0.0);
    EXPECT_FALSE(r->expected_fail);
}

TEST(FirstBranch, HoldsAcrossHeights) {
    for (double b : {1e-4, 0.1, 0.5, 1.0, 1.9}) {
        for (const auto& r : check_first_branch(trace_profile(b, kP, kCfg))) {
            EXPECT_TRUE(r.pass()) << r.claim_id << " at b = " << b;
        }
    }
}

TEST(SmallHeight, RefusesLargeHeights) {
    EXPECT_THROW(check_small_b(trace_profile(1e-3, kP, kCfg)), DomainError);
}

TEST(SecondBranch, HoldsAtSmallHeight) {
    for (const auto& r : check_second_branch(trace_profile(1e-3, kP, kCfg))) {
        if (r.applicable()) {
            EXPECT_TRUE(r.pass()) << r.claim_id << " " << r.margin;
        }
    }
}

TEST(Divergence, IdentityHoldsOnTheFirstBranch) {
    for (double b : {1e-6, 0.5, 1.5}) {
        const auto r = check_divergence_form(trace_profile(b, kP, kCfg));
        EXPECT_TRUE(r.pass()) << "b = " << b << " discrepancy " << r.lhs;
        EXPECT_LE(r.lhs, 1e-4);
    }
}

TEST(Continuity, HalvingTheStepHalvesTheDifference) {
    const auto rs = check_continuity(0.5, 1e-3, kP, kCfg);
    ASSERT_FALSE(rs.empty());
    for (const auto& r : rs) {
        EXPECT_TRUE(is_registered(r.claim_id));
        EXPECT_TRUE(r.pass()) << r.claim_id << " ratio " << r.rhs / r.lhs;
    }
}

TEST(Continuity, ZeroStepIsTrivial) {
    for (const auto& r : check_continuity(0.5, 0.0, kP, kCfg)) {
        EXPECT_TRUE(r.pass()) << r.claim_id;
    }
}

TEST(ThirdDerivative, GatedOnTheSlopeHypothesis) {
    const auto small = check_third_derivative_sign(trace_profile(1e-3, kP, kCfg));
    EXPECT_TRUE(small.pass()) << small.note;
    const auto steep = check_third_derivative_sign(trace_profile(1.9, kP, kCfg));
    EXPECT_EQ(steep.verdict, Verdict::NotApplicable);
}

TEST(OtherDimensions, SecondBranchClaimsDoNotApply) {
    const ShrinkerParams p3{3};
    const auto d = trace_profile(0.5, p3, kCfg);
    for (const auto& r : check_small_b(trace_profile(1e-6, p3, kCfg))) {
        EXPECT_EQ(r.verdict, Verdict::NotApplicable) << r.claim_id;
    }
    EXPECT_FALSE(check_first_branch(d).empty());
}

TEST(Residual, EmittedSphereProfileSolvesTheEquation) {
    const auto report = find_sphere_height(kP, kCfg);
    const double res = curve_ode_residual(report.closed_curve, kP, 1e-3);
    EXPECT_LT(res, 1e-5);
}

TEST(Residual, RoundSphereProfile) {
    const auto curve = assemble_closed_curve(trace_profile(2.0, kP, kCfg), 1e-8);
    EXPECT_LT(curve_ode_residual(curve, kP, 1e-3), 1e-5);
}

TEST(Names, VerdictStrings) {
    EXPECT_EQ(to_string(Verdict::Pass), "pass");
    EXPECT_EQ(to_string(Verdict::Fail), "fail");
    EXPECT_EQ(to_string(Verdict::NotApplicable), "not_applicable");
}

}  // namespace
