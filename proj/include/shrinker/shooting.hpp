#pragma once

#include "shrinker/closed_curve.hpp"
#include "shrinker/integrator.hpp"
#include "shrinker/profile_ode.hpp"
#include "shrinker/series_seed.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shrinker {

struct ShootingOptions {
    /// Largest initial height accepted by trace_profile.
    double b_max = 4.0;
    double b_tol = 1e-12;
    double r_tol = 1e-12;
    double closure_tol = 1e-8;
    /// A horizontal tangent closer to the axis than this cannot be told apart
    /// from the curve running into the axis; it is treated as axis arrival.
    double axis_zone = 1e-4;
    /// Number of series samples prepended to the first branch.
    int seed_samples = 41;
    int max_iterations = 200;
    SeedOptions seed;
};

/// How the second branch ended.
enum class BetaEnd { SecondVerticalTangent, AxisArrival, Guard, NotReached };

std::string_view to_string(BetaEnd end);

/// The first (gamma) and second (beta) branches of one trajectory, split at the
/// first vertical tangent, with their marker points.
struct BranchDecomposition {
    double b = 0.0;
    ShrinkerParams params;
    SeriesSeed seed;
    /// Series samples from the axis to the launch point.
    std::vector<PlanarState> seed_segment;
    Trajectory gamma_branch;
    Trajectory beta_branch;

    bool reached_first_tangent = false;
    BetaEnd beta_end = BetaEnd::NotReached;

    double x_star = 0.0;
    double z_star = 0.0;
    std::optional<double> x_m;
    std::optional<double> z_m;
    std::optional<double> x_star2;
    std::optional<double> z_star2;
    /// Where the first branch crosses z = 0.
    std::optional<double> x_zero;
    /// Where the first branch has slope -1.
    std::optional<double> x_one;
};

enum class OutcomeTag { MinThenPositive, MinThenNegative, NoMin, Indeterminate };

std::string_view to_string(OutcomeTag tag);

BranchDecomposition trace_profile(double b, const ShrinkerParams& params,
                                  const StepperConfig& config, const ShootingOptions& opts = {});

/// MinThenPositive iff a horizontal tangent exists on the second branch and the
/// second vertical tangent sits strictly above event_tol.
OutcomeTag classify(const BranchDecomposition& decomp);

/// gamma, then beta, then their mirror images: a profile that meets the axis at
/// (0, b) and (0, -b).  Without a horizontal tangent the first branch alone is
/// mirrored (round sphere).  Throws ClosureFailure if the junction height
/// exceeds 10 * closure_tol.
ClosedCurve assemble_closed_curve(const BranchDecomposition& decomp, double closure_tol);

enum class ShootTarget { Sphere, Torus };

std::string_view to_string(ShootTarget target);

struct BracketStep {
    double low = 0.0;
    double high = 0.0;
    std::string outcome_low;
    std::string outcome_high;
};

struct ShootReport {
    ShootTarget target = ShootTarget::Sphere;
    double root = 0.0;
    std::vector<BracketStep> bracket_history;
    int iterations = 0;
    ClosedCurve closed_curve;
    std::vector<Crossing> self_intersections;
    double closure_residual = 0.0;
    /// Sphere search: the decomposition at the root.
    std::optional<BranchDecomposition> decomposition;
    /// Torus search: the upper half of the profile.
    std::optional<Trajectory> torus_half;
};

ShootReport find_sphere_height(const ShrinkerParams& params, const StepperConfig& config,
                               std::pair<double, double> bracket = {1e-3, 2.0},
                               const ShootingOptions& opts = {});

/// Shot from (r, 0) with a vertical tangent heading up: the trajectory to the
/// next vertical tangent and its height there, if one is reached.
struct TorusShot {
    double r = 0.0;
    Trajectory trajectory;
    std::optional<double> height;
};

TorusShot shoot_torus(double r, const ShrinkerParams& params, const StepperConfig& config);

ShootReport find_torus_radius(const ShrinkerParams& params, const StepperConfig& config,
                              std::pair<double, double> bracket = {3.0, 3.5},
                              const ShootingOptions& opts = {});

/// Outcomes over a list of heights, evaluated concurrently.
struct PredicateSweep {
    std::vector<double> b;
    std::vector<OutcomeTag> tags;
    /// Consecutive sample pairs where membership in MinThenPositive changes.
    std::vector<std::pair<double, double>> transitions;
    /// Membership is one interval starting at the first sample.
    bool single_interval = false;
};

PredicateSweep sweep_predicate(const std::vector<double>& heights, const ShrinkerParams& params,
                               const StepperConfig& config, const ShootingOptions& opts = {});

/// Logarithmically spaced heights in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace shrinker
