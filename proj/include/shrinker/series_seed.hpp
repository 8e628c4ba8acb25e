#pragma once

#include "shrinker/profile_ode.hpp"

#include <span>
#include <vector>

namespace shrinker {

/// Truncated even power series gamma(x) = sum coeffs[i] x^i for the solution
/// that leaves the axis perpendicularly at height b.
struct SeriesSeed {
    double b = 0.0;
    /// coeffs[0 .. 2M]; odd entries are exactly zero.
    std::vector<double> coeffs;
    int M = 0;
    /// Growth constant: |coeffs[2m]| <= A^(2m-1) / (2m)^3 for 1 <= m <= M.
    double growth_constant = 1.0;
    double patch_radius = 0.1;
    int n = 2;
};

struct SeedOptions {
    int M = 20;
    double max_patch_radius = 0.1;
    /// Patch radius used by the two-term expansion when n != 2.
    double low_order_patch_radius = 1e-3;
    double magnitude_cap = 1e100;
};

struct SeedValue {
    double g = 0.0;
    double gp = 0.0;
    double gpp = 0.0;
    /// Bound on the truncated tail of the series for gamma at x.
    double tail_bound = 0.0;
};

/// Right-hand side of the coefficient recurrence, i.e. (m+2)^2 a_{m+2}, built
/// from coeffs[0 .. m+1].  Only meaningful for n = 2.
double recurrence_rhs(std::span<const double> coeffs, int m);

/// Full recurrence for n = 2.  Throws DomainError for n != 2 or M < 2 and
/// SeedRangeError if a coefficient exceeds opts.magnitude_cap.
SeriesSeed compute_coefficients(double b, int M, const ShrinkerParams& params,
                                const SeedOptions& opts = {});

/// Seed for any n: the recurrence for n = 2, otherwise the two-term expansion
/// b - b x^2 / (4 n) on a shrunken patch.
SeriesSeed make_seed(double b, const ShrinkerParams& params, const SeedOptions& opts = {});

/// Evaluates gamma, gamma', gamma'' at 0 <= x <= patch_radius.
SeedValue eval_seed(const SeriesSeed& seed, double x);

/// Arc length of the series curve from the axis to x.
double seed_arc_length(const SeriesSeed& seed, double x);

/// Launch point on the edge of the patch, in arc-length form.
PlanarState launch_state(const SeriesSeed& seed);

/// `count` states from the axis to the patch edge (inclusive), equally spaced in x.
std::vector<PlanarState> seed_samples(const SeriesSeed& seed, int count);

}  // namespace shrinker
