#pragma once

#include "shrinker/closed_curve.hpp"
#include "shrinker/integrator.hpp"
#include "shrinker/profile_ode.hpp"
#include "shrinker/shooting.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shrinker {

enum class Verdict { Pass, Fail, NotApplicable };

std::string_view to_string(Verdict v);

/// One evaluated inequality.  margin = rhs - lhs for "lhs <= rhs" style claims;
/// for interval claims it is the distance to the nearer end.
struct BoundReport {
    std::string claim_id;
    double b = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    Verdict verdict = Verdict::NotApplicable;
    /// Strict claims need margin > tolerance, the rest margin >= -tolerance.
    bool strict = false;
    /// A failure that is known in advance, e.g. the boundary case of a strict claim.
    bool expected_fail = false;
    std::string note;

    bool pass() const { return verdict == Verdict::Pass; }
    bool applicable() const { return verdict != Verdict::NotApplicable; }
};

struct ClaimInfo {
    std::string_view id;
    std::string_view statement;
};

/// Every claim identifier any check can emit, in a fixed order.
std::span<const ClaimInfo> claim_registry();
bool is_registered(std::string_view claim_id);

/// Largest height for which the small-height estimates on the first branch are
/// established: sqrt(2 / (pi e^25)).
double small_height_threshold();

/// Default tolerance applied to margins.
inline constexpr double kMarginTolerance = 1e-9;

/// Concavity, x* above the cylinder radius, finiteness and sign of z*.
std::vector<BoundReport> check_first_branch(const BranchDecomposition& decomp,
                                            double tol = kMarginTolerance);

/// Quantitative first-branch estimates for tiny heights.  Throws DomainError if
/// b exceeds small_height_threshold().
std::vector<BoundReport> check_small_b(const BranchDecomposition& decomp,
                                       double tol = kMarginTolerance);

/// Shape of the continued branch: the single minimum, its convexity and
/// location, and where the second vertical tangent can sit.
std::vector<BoundReport> check_second_branch(const BranchDecomposition& decomp,
                                             double tol = kMarginTolerance);

/// d/dx(x g' / sqrt(1+g'^2)) = (x/2)(x g' - g) / sqrt(1+g'^2) along a graph-over-x
/// branch, with the left side by central differences on a uniform x grid.
BoundReport check_divergence_form(const Trajectory& branch, double b, double threshold = 1e-4);
BoundReport check_divergence_form(const BranchDecomposition& decomp, double threshold = 1e-4);

/// Differences between the profiles at b0, b0 + db and b0 + db / 2.  Each
/// quantity passes when halving db scales its difference by a ratio in
/// [0.25, 0.75].
std::vector<BoundReport> check_continuity(double b0, double db, const ShrinkerParams& params,
                                          const StepperConfig& config,
                                          const ShootingOptions& opts = {});

/// gamma''' < 0 on the first branch, gated on |gamma'| <= sqrt(3)/3 over [0, sqrt 2].
BoundReport check_third_derivative_sign(const BranchDecomposition& decomp);

/// Every check that applies at height b, in registry order.
std::vector<BoundReport> verify_height(double b, const ShrinkerParams& params,
                                       const StepperConfig& config,
                                       const ShootingOptions& opts = {});

/// ode_residual after filling each polyline interval with states spaced ds
/// apart, obtained by single steps from the interval's first node.  Intervals
/// starting on the axis are skipped.
double curve_ode_residual(const ClosedCurve& curve, const ShrinkerParams& params, double ds);

}  // namespace shrinker
