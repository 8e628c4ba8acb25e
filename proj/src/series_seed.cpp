#include "shrinker/series_seed.hpp"

#include "shrinker/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace shrinker {

namespace {

// Terms of the recurrence vanish unless every coefficient index is even, but
// the sums are written over all indices to mirror the recurrence literally.
double coefficient(std::span<const double> a, int i) {
    return (i >= 0 && i < static_cast<int>(a.size())) ? a[static_cast<std::size_t>(i)] : 0.0;
}

double fit_growth_constant(std::span<const double> coeffs, int M) {
    for (int k = -30; k < 200; ++k) {
        const double A = std::ldexp(1.0, k);
        bool holds = true;
        for (int m = 1; m <= M && holds; ++m) {
            const double bound = std::pow(A, 2 * m - 1) / std::pow(2.0 * m, 3);
            holds = std::abs(coeffs[static_cast<std::size_t>(2 * m)]) <= bound;
        }
        if (holds) {
            return A;
        }
    }
    throw SeedRangeError("no growth constant fits the series coefficients");
}

}  // namespace

double recurrence_rhs(std::span<const double> a, int m) {
    double rhs = 0.5 * (m - 1) * coefficient(a, m);

    double pair = 0.0;
    for (int i = 0; i <= m; ++i) {
        const int j = m - i;
        pair += (i + 1) * (j + 1) * coefficient(a, i + 1) * coefficient(a, j + 1);
    }
    rhs -= 0.5 * coefficient(a, 0) * pair;

    double weighted = 0.0;
    for (int i = 0; i <= m - 1; ++i) {
        for (int j = 0; i + j <= m - 1; ++j) {
            const int k = m - 1 - i - j;
            weighted += (i + 1) * (j + 1) * k * coefficient(a, i + 1) * coefficient(a, j + 1) *
                        coefficient(a, k + 1);
        }
    }
    rhs += 0.5 * weighted;

    double cubic = 0.0;
    for (int i = 0; i <= m + 1; ++i) {
        for (int j = 0; i + j <= m + 1; ++j) {
            const int k = m + 1 - i - j;
            cubic += (i + 1) * (j + 1) * (k + 1) * coefficient(a, i + 1) *
                     coefficient(a, j + 1) * coefficient(a, k + 1);
        }
    }
    rhs -= cubic;
    return rhs;
}

SeriesSeed compute_coefficients(double b, int M, const ShrinkerParams& params,
                                const SeedOptions& opts) {
    params.validate();
    if (params.n != 2) {
        throw DomainError("coefficient recurrence is only available for n = 2");
    }
    if (M < 2) {
        throw DomainError("series truncation M must be at least 2");
    }
    SeriesSeed seed;
    seed.b = b;
    seed.M = M;
    seed.n = params.n;
    seed.coeffs.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
    seed.coeffs[0] = b;
    // a_1 = 0; a_{m+2} follows from a_0 .. a_{m+1}.
    for (int m = 0; m + 2 <= 2 * M; ++m) {
        const std::span<const double> known(seed.coeffs.data(), static_cast<std::size_t>(m + 2));
        const double value = recurrence_rhs(known, m) / static_cast<double>((m + 2) * (m + 2));
        if (!std::isfinite(value) || std::abs(value) > opts.magnitude_cap) {
            throw SeedRangeError("series coefficient a_" + std::to_string(m + 2) +
                                 " exceeds the magnitude cap for b = " + std::to_string(b));
        }
        seed.coeffs[static_cast<std::size_t>(m + 2)] = value;
    }
    seed.growth_constant = fit_growth_constant(seed.coeffs, M);
    seed.patch_radius = std::min(1.0 / seed.growth_constant, opts.max_patch_radius);
    return seed;
}

SeriesSeed make_seed(double b, const ShrinkerParams& params, const SeedOptions& opts) {
    params.validate();
    if (params.n == 2) {
        return compute_coefficients(b, opts.M, params, opts);
    }
    SeriesSeed seed;
    seed.b = b;
    seed.M = 1;
    seed.n = params.n;
    seed.coeffs = {b, 0.0, -b / (4.0 * params.n)};
    seed.growth_constant = std::max(std::abs(b), 1.0);
    seed.patch_radius = std::min(opts.low_order_patch_radius, 1.0 / seed.growth_constant);
    return seed;
}

SeedValue eval_seed(const SeriesSeed& seed, double x) {
    if (!(x >= 0.0) || x > seed.patch_radius) {
        throw DomainError("eval_seed: x = " + std::to_string(x) + " outside [0, patch_radius]");
    }
    const double u = x * x;
    double g = 0.0;
    double dg = 0.0;   // sum 2m a_2m u^(m-1)
    double ddg = 0.0;  // sum 2m (2m-1) a_2m u^(m-1)
    for (int m = seed.M; m >= 1; --m) {
        const double a = seed.coeffs[static_cast<std::size_t>(2 * m)];
        g = g * u + a;
        dg = dg * u + 2.0 * m * a;
        ddg = ddg * u + 2.0 * m * (2.0 * m - 1.0) * a;
    }
    SeedValue v;
    v.g = g * u + seed.coeffs[0];
    v.gp = x * dg;
    v.gpp = ddg;

    if (seed.n == 2) {
        // Geometric majorant of the dropped terms from the growth bound.
        const double A = seed.growth_constant;
        const double ratio = (A * x) * (A * x);
        const int m = seed.M + 1;
        const double first = std::pow(A, 2 * m - 1) / std::pow(2.0 * m, 3) * std::pow(x, 2 * m);
        v.tail_bound = ratio < 1.0 ? first / (1.0 - ratio) : first;
    } else {
        // Leading neglected term scales like b x^4.
        v.tail_bound = std::max(std::abs(seed.b), 1.0) * u * u;
    }
    return v;
}

double seed_arc_length(const SeriesSeed& seed, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    auto speed = [&seed](double t) {
        const double gp = eval_seed(seed, t).gp;
        return std::sqrt(1.0 + gp * gp);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, 0.0, x, 5, 1e-15);
}

PlanarState launch_state(const SeriesSeed& seed) {
    const double r = seed.patch_radius;
    const SeedValue v = eval_seed(seed, r);
    return {r, v.g, std::atan(v.gp), seed_arc_length(seed, r)};
}

std::vector<PlanarState> seed_samples(const SeriesSeed& seed, int count) {
    count = std::max(count, 2);
    std::vector<PlanarState> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = seed.patch_radius * static_cast<double>(i) / (count - 1);
        const SeedValue v = eval_seed(seed, std::min(x, seed.patch_radius));
        out.push_back({x, v.g, std::atan(v.gp), seed_arc_length(seed, x)});
    }
    return out;
}

}  // namespace shrinker
