#include "shrinker/verify.hpp"

#include "shrinker/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace shrinker {

namespace {

constexpr double kBig = std::numeric_limits<double>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::numbers::sqrt2;
const double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;

constexpr std::array<ClaimInfo, 27> kRegistry{{
    {"first.concavity", "gamma'' < 0 on the first branch"},
    {"first.x_star_cylinder", "the first vertical tangent lies outside the cylinder radius"},
    {"first.z_star_finite", "gamma has a finite limit at the first vertical tangent"},
    {"first.z_star_negative", "the first vertical tangent lies below the x-axis"},
    {"small.x_star_lower", "x* >= sqrt(log(2 / (pi b^2)))"},
    {"small.z_star_lower", "z* >= -12 / sqrt(log(2 / (pi b^2)))"},
    {"small.z_star_upper", "z* < 0"},
    {"small.x_zero_interval", "gamma crosses z = 0 at some x0 in [2, 2 sqrt 2]"},
    {"small.x_star_beyond", "x* > 2 sqrt 2"},
    {"small.slope_moderate", "|gamma'| <= sqrt(3)/3 on [0, 2 sqrt 2]"},
    {"small.ratio_bound", "gamma(x) > (8 / x) gamma'(x) on [x0, x*)"},
    {"small.slope_end", "gamma'(x) >= -2 / sqrt(x*^2 - x^2) on [x1, x*)"},
    {"second.unique_min", "the continued branch has at most one horizontal tangent"},
    {"second.convexity", "beta'' > 0 between the two vertical tangents when a minimum exists"},
    {"second.x_star2_cylinder", "the second vertical tangent lies inside the cylinder radius"},
    {"second.bounded_above", "beta is bounded above"},
    {"second.x_star2_positive", "with a minimum, the second vertical tangent is off the axis"},
    {"second.min_location", "if x* >= 4 the minimum lies in [x* - 2, x*)"},
    {"second.sandwich", "2 z* <= beta(x) < 0 on [2 sqrt 2, x*]"},
    {"second.x_star2_linear", "x** <= 8 / (pi - sqrt 2) * (-z*) when beta < 0 throughout"},
    {"second.positive_closure", "0 < z** < infinity for tiny heights"},
    {"identity.divergence", "divergence form of the graph equation"},
    {"continuity.gamma_sup", "sup |gamma_b - gamma_b'| vanishes linearly in |b - b'|"},
    {"continuity.x_star", "x* depends continuously on b"},
    {"continuity.z_star", "z* depends continuously on b"},
    {"continuity.z_star2", "z** depends continuously on b near a closing height"},
    {"third.negative", "gamma''' < 0 on (0, x*) when |gamma'| <= sqrt(3)/3 on [0, sqrt 2]"},
}};

BoundReport evaluate(std::string_view id, double b, double lhs, double rhs, double margin,
                     bool strict, double tol) {
    BoundReport r;
    r.claim_id = std::string(id);
    r.b = b;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    r.strict = strict;
    const bool ok = !std::isnan(margin) && (strict ? margin > tol : margin >= -tol);
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return r;
}

BoundReport not_applicable(std::string_view id, double b, std::string note) {
    BoundReport r;
    r.claim_id = std::string(id);
    r.b = b;
    r.verdict = Verdict::NotApplicable;
    r.note = std::move(note);
    return r;
}

BoundReport failed(std::string_view id, double b, std::string note) {
    BoundReport r = not_applicable(id, b, std::move(note));
    r.verdict = Verdict::Fail;
    return r;
}

/// Points of the first branch away from the axis and off the vertical tangent.
std::vector<PlanarState> gamma_samples(const BranchDecomposition& d, double min_cos) {
    std::vector<PlanarState> out;
    for (const auto& p : d.seed_segment) {
        if (p.x > 0.0) {
            out.push_back(p);
        }
    }
    for (const auto& p : d.gamma_branch.states) {
        if (std::cos(p.theta) > min_cos && (out.empty() || p.s > out.back().s)) {
            out.push_back(p);
        }
    }
    return out;
}

double second_derivative(const PlanarState& p, const ShrinkerParams& params) {
    return graph_x_rhs(p.x, p.z, std::tan(p.theta), params);
}

double height_at_x(const Trajectory& traj, double x) {
    const auto s = locate_on(
        traj, traj.states.front().s, traj.states.back().s,
        [x](const PlanarState& p) { return p.x - x; }, 1e-14);
    if (!s) {
        throw DomainError("height_at_x: abscissa outside the branch");
    }
    return dense_state(traj, *s).z;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not_applicable";
    }
    return "not_applicable";
}

std::span<const ClaimInfo> claim_registry() { return kRegistry; }

bool is_registered(std::string_view claim_id) {
    return std::any_of(kRegistry.begin(), kRegistry.end(),
                       [claim_id](const ClaimInfo& c) { return c.id == claim_id; });
}

double small_height_threshold() {
    return std::sqrt(2.0 / (std::numbers::pi * std::exp(25.0)));
}

std::vector<BoundReport> check_first_branch(const BranchDecomposition& d, double tol) {
    const double b = d.b;
    std::vector<BoundReport> out;

    double worst = -kInf;
    for (const auto& p : gamma_samples(d, 1e-9)) {
        worst = std::max(worst, second_derivative(p, d.params));
    }
    out.push_back(evaluate("first.concavity", b, worst, 0.0, -worst, true, 0.0));

    if (!d.reached_first_tangent) {
        for (auto id : {"first.x_star_cylinder", "first.z_star_finite", "first.z_star_negative"}) {
            out.push_back(failed(id, b, "first branch ended at a guard"));
        }
        return out;
    }
    const double radius = d.params.cylinder_radius();
    out.push_back(
        evaluate("first.x_star_cylinder", b, radius, d.x_star, d.x_star - radius, true, tol));
    out.push_back(evaluate("first.z_star_finite", b, std::abs(d.z_star), kBig,
                           std::isfinite(d.z_star) ? kBig : -kInf, false, tol));

    const double sphere = d.params.sphere_radius();
    if (b > sphere) {
        out.push_back(not_applicable("first.z_star_negative", b,
                                     "height above the round sphere"));
    } else {
        auto r = evaluate("first.z_star_negative", b, d.z_star, 0.0, -d.z_star, true, tol);
        if (b == sphere) {
            r.expected_fail = true;
            r.note = "round sphere: z* = 0 is the boundary case";
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BoundReport> check_small_b(const BranchDecomposition& d, double tol) {
    const double b = d.b;
    const double bbar = small_height_threshold();
    if (b > bbar) {
        throw DomainError("check_small_b: height " + fmt(b) + " above threshold " + fmt(bbar));
    }
    static constexpr std::array<const char*, 8> ids{
        "small.x_star_lower", "small.z_star_lower",   "small.z_star_upper",
        "small.x_zero_interval", "small.x_star_beyond", "small.slope_moderate",
        "small.ratio_bound",  "small.slope_end"};
    std::vector<BoundReport> out;
    if (d.params.n != 2) {
        for (auto id : ids) {
            out.push_back(not_applicable(id, b, "estimates are stated for n = 2"));
        }
        return out;
    }
    if (!d.reached_first_tangent) {
        for (auto id : ids) {
            out.push_back(failed(id, b, "first branch ended at a guard"));
        }
        return out;
    }

    const double root_log = std::sqrt(std::log(2.0 / (std::numbers::pi * b * b)));
    const double xs = d.x_star;
    const double zs = d.z_star;
    out.push_back(evaluate(ids[0], b, root_log, xs, xs - root_log, false, tol));
    out.push_back(evaluate(ids[1], b, -12.0 / root_log, zs, zs + 12.0 / root_log, false, tol));
    out.push_back(evaluate(ids[2], b, zs, 0.0, -zs, true, tol));

    if (d.x_zero) {
        const double x0 = *d.x_zero;
        auto r = evaluate(ids[3], b, x0, kTwoSqrt2, std::min(x0 - 2.0, kTwoSqrt2 - x0), false, tol);
        out.push_back(std::move(r));
    } else {
        out.push_back(failed(ids[3], b, "first branch never crosses z = 0"));
    }
    out.push_back(evaluate(ids[4], b, kTwoSqrt2, xs, xs - kTwoSqrt2, true, tol));

    const auto samples = gamma_samples(d, 1e-6);
    double steepest = 0.0;
    for (const auto& p : samples) {
        if (p.x <= kTwoSqrt2) {
            steepest = std::max(steepest, std::abs(std::tan(p.theta)));
        }
    }
    const double third = std::sqrt(3.0) / 3.0;
    out.push_back(evaluate(ids[5], b, steepest, third, third - steepest, false, tol));

    if (d.x_zero) {
        double worst = kInf;
        for (const auto& p : samples) {
            if (p.x >= *d.x_zero) {
                worst = std::min(worst, p.z - 8.0 / p.x * std::tan(p.theta));
            }
        }
        out.push_back(evaluate(ids[6], b, worst, 0.0, worst, true, 0.0));
    } else {
        out.push_back(failed(ids[6], b, "first branch never crosses z = 0"));
    }

    if (d.x_one) {
        double worst = kInf;
        for (const auto& p : samples) {
            if (p.x >= *d.x_one && p.x < xs) {
                const double bound = -2.0 / std::sqrt(xs * xs - p.x * p.x);
                worst = std::min(worst, std::tan(p.theta) - bound);
            }
        }
        out.push_back(evaluate(ids[7], b, worst, 0.0, worst, false, tol));
    } else {
        out.push_back(failed(ids[7], b, "slope -1 never reached"));
    }
    return out;
}

std::vector<BoundReport> check_second_branch(const BranchDecomposition& d, double tol) {
    const double b = d.b;
    static constexpr std::array<const char*, 9> ids{
        "second.unique_min",       "second.convexity",     "second.x_star2_cylinder",
        "second.bounded_above",    "second.x_star2_positive", "second.min_location",
        "second.sandwich",         "second.x_star2_linear", "second.positive_closure"};
    std::vector<BoundReport> out;
    if (d.params.n != 2) {
        for (auto id : ids) {
            out.push_back(not_applicable(id, b, "estimates are stated for n = 2"));
        }
        return out;
    }
    if (!d.reached_first_tangent || d.beta_branch.states.empty()) {
        for (auto id : ids) {
            out.push_back(not_applicable(id, b, "no continued branch"));
        }
        return out;
    }
    const auto& beta = d.beta_branch;
    const double axis_zone = ShootingOptions{}.axis_zone;

    int minima = 0;
    for (const auto& e : beta.events) {
        if (e.kind == EventKind::HorizontalTangent && e.state.x >= axis_zone) {
            ++minima;
        }
    }
    out.push_back(evaluate(ids[0], b, minima, 1.0, 1.0 - minima, false, 0.0));

    if (d.x_m) {
        double worst = kInf;
        for (const auto& p : beta.states) {
            if (std::abs(std::cos(p.theta)) > 1e-9) {
                worst = std::min(worst, second_derivative(p, d.params));
            }
        }
        out.push_back(evaluate(ids[1], b, worst, 0.0, worst, true, 0.0));
    } else {
        out.push_back(not_applicable(ids[1], b, "no horizontal tangent"));
    }

    const double radius = d.params.cylinder_radius();
    if (d.x_star2) {
        out.push_back(
            evaluate(ids[2], b, *d.x_star2, radius, radius - *d.x_star2, true, tol));
    } else if (d.beta_end == BetaEnd::AxisArrival) {
        const double x_end = beta.states.back().x;
        auto r = evaluate(ids[2], b, x_end, radius, radius - x_end, true, tol);
        r.note = "branch runs into the axis";
        out.push_back(std::move(r));
    } else {
        out.push_back(failed(ids[2], b, "continued branch ended at a guard"));
    }

    double top = -kInf;
    for (const auto& p : beta.states) {
        top = std::max(top, p.z);
    }
    const bool terminated = d.beta_end == BetaEnd::SecondVerticalTangent ||
                            d.beta_end == BetaEnd::AxisArrival;
    out.push_back(evaluate(ids[3], b, top, kBig,
                           terminated && std::isfinite(top) ? kBig : -kInf, false, tol));

    if (d.x_m) {
        if (d.x_star2) {
            out.push_back(evaluate(ids[4], b, 0.0, *d.x_star2, *d.x_star2, true, 0.0));
        } else {
            out.push_back(failed(ids[4], b, "minimum without a second vertical tangent"));
        }
    } else {
        out.push_back(not_applicable(ids[4], b, "no horizontal tangent"));
    }

    if (d.x_star >= 4.0) {
        if (d.x_m) {
            const double xm = *d.x_m;
            out.push_back(evaluate(ids[5], b, xm, d.x_star,
                                   std::min(xm - (d.x_star - 2.0), d.x_star - xm), false, tol));
        } else {
            out.push_back(failed(ids[5], b, "no horizontal tangent although x* >= 4"));
        }
    } else {
        out.push_back(not_applicable(ids[5], b, "x* < 4"));
    }

    if (b <= small_height_threshold()) {
        double worst = kInf;
        for (const auto& p : beta.states) {
            if (p.x >= kTwoSqrt2) {
                worst = std::min({worst, p.z - 2.0 * d.z_star, -p.z});
            }
        }
        out.push_back(evaluate(ids[6], b, worst, 0.0, worst, true, 0.0));

        const bool negative_throughout =
            std::all_of(beta.states.begin(), beta.states.end() - 1,
                        [](const PlanarState& p) { return p.z < 0.0; });
        if (negative_throughout && d.x_star2) {
            const double bound = 8.0 / (std::numbers::pi - kSqrt2) * (-d.z_star);
            out.push_back(
                evaluate(ids[7], b, *d.x_star2, bound, bound - *d.x_star2, false, tol));
        } else {
            out.push_back(not_applicable(ids[7], b, "beta is not negative throughout"));
        }

        if (d.z_star2) {
            auto r = evaluate(ids[8], b, 0.0, *d.z_star2, *d.z_star2, true, tol);
            r.note = "tested beyond the proved range";
            out.push_back(std::move(r));
        } else {
            auto r = failed(ids[8], b, "no second vertical tangent");
            r.note += "; tested beyond the proved range";
            out.push_back(std::move(r));
        }
    } else {
        for (std::size_t i = 6; i < ids.size(); ++i) {
            out.push_back(not_applicable(ids[i], b, "height above the small-height threshold"));
        }
    }
    return out;
}

BoundReport check_divergence_form(const Trajectory& branch, double b, double threshold) {
    constexpr const char* id = "identity.divergence";
    if (branch.states.size() < 2) {
        return not_applicable(id, b, "empty branch");
    }
    // Stay on the part that is a graph over x with bounded slope.
    const double min_cos = 0.25;
    std::size_t end = 0;
    while (end < branch.states.size() && std::cos(branch.states[end].theta) >= min_cos) {
        ++end;
    }
    if (end < 2) {
        return not_applicable(id, b, "branch is not a graph over x");
    }
    Trajectory part = branch;
    part.states.resize(end);
    const auto grid = resample_uniform(part, 1e-3);
    if (grid.size() < 100) {
        return not_applicable(id, b, "fewer than 100 samples on the graph part");
    }

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const auto& a = grid[i - 1];
        const auto& m = grid[i];
        const auto& c = grid[i + 1];
        const double h1 = m.x - a.x;
        const double h2 = c.x - m.x;
        const double qa = a.x * std::sin(a.theta);
        const double qm = m.x * std::sin(m.theta);
        const double qc = c.x * std::sin(c.theta);
        const double lhs = (qc - qm) * h1 / (h2 * (h1 + h2)) + (qm - qa) * h2 / (h1 * (h1 + h2));
        const double rhs = 0.5 * m.x * (m.x * std::sin(m.theta) - m.z * std::cos(m.theta));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return evaluate(id, b, worst, threshold, threshold - worst, false, 0.0);
}

BoundReport check_divergence_form(const BranchDecomposition& d, double threshold) {
    return check_divergence_form(d.gamma_branch, d.b, threshold);
}

std::vector<BoundReport> check_continuity(double b0, double db, const ShrinkerParams& params,
                                          const StepperConfig& config,
                                          const ShootingOptions& opts) {
    static constexpr std::array<const char*, 4> ids{"continuity.gamma_sup", "continuity.x_star",
                                                    "continuity.z_star", "continuity.z_star2"};
    if (!(db >= 0.0)) {
        throw DomainError("check_continuity: db must be nonnegative");
    }
    std::vector<BoundReport> out;
    if (db == 0.0) {
        for (auto id : ids) {
            auto r = evaluate(id, b0, 0.0, 0.0, 0.0, false, 0.0);
            r.note = "identical heights";
            out.push_back(std::move(r));
        }
        return out;
    }

    const auto d0 = trace_profile(b0, params, config, opts);
    const auto d1 = trace_profile(b0 + db, params, config, opts);
    const auto d2 = trace_profile(b0 + 0.5 * db, params, config, opts);
    if (!d0.reached_first_tangent || !d1.reached_first_tangent || !d2.reached_first_tangent) {
        for (auto id : ids) {
            out.push_back(failed(id, b0, "a first branch ended at a guard"));
        }
        return out;
    }

    const double x_lo = std::max({d0.gamma_branch.states.front().x,
                                  d1.gamma_branch.states.front().x,
                                  d2.gamma_branch.states.front().x});
    const double x_hi = std::min({d0.x_star, d1.x_star, d2.x_star}) - 0.1;
    double sup1 = 0.0;
    double sup2 = 0.0;
    constexpr int kGrid = 200;
    for (int k = 0; k <= kGrid && x_hi > x_lo; ++k) {
        const double x = x_lo + (x_hi - x_lo) * k / kGrid;
        const double g0 = height_at_x(d0.gamma_branch, x);
        sup1 = std::max(sup1, std::abs(g0 - height_at_x(d1.gamma_branch, x)));
        sup2 = std::max(sup2, std::abs(g0 - height_at_x(d2.gamma_branch, x)));
    }

    auto ratio_report = [&](const char* id, double coarse, double fine) {
        if (coarse == 0.0 && fine == 0.0) {
            auto r = evaluate(id, b0, 0.0, 0.0, 0.0, false, 0.0);
            r.note = "no difference";
            return r;
        }
        const double ratio = coarse > 0.0 ? fine / coarse : kInf;
        auto r = evaluate(id, b0, coarse, fine, std::min(ratio - 0.25, 0.75 - ratio), false, 0.0);
        r.note = "ratio " + fmt(ratio);
        return r;
    };
    out.push_back(ratio_report(ids[0], sup1, sup2));
    out.push_back(ratio_report(ids[1], std::abs(d1.x_star - d0.x_star),
                               std::abs(d2.x_star - d0.x_star)));
    out.push_back(ratio_report(ids[2], std::abs(d1.z_star - d0.z_star),
                               std::abs(d2.z_star - d0.z_star)));
    if (d0.z_star2 && d1.z_star2 && d2.z_star2 && d0.x_m && d1.x_m && d2.x_m) {
        out.push_back(ratio_report(ids[3], std::abs(*d1.z_star2 - *d0.z_star2),
                                   std::abs(*d2.z_star2 - *d0.z_star2)));
    } else {
        out.push_back(not_applicable(ids[3], b0, "no closing tangent after a minimum"));
    }
    return out;
}

BoundReport check_third_derivative_sign(const BranchDecomposition& d) {
    constexpr const char* id = "third.negative";
    const double b = d.b;
    if (d.params.n != 2) {
        return not_applicable(id, b, "stated for n = 2");
    }
    if (!d.reached_first_tangent || d.x_star <= kSqrt2) {
        return not_applicable(id, b, "first branch does not reach sqrt 2");
    }
    const auto& gamma = d.gamma_branch;
    double slope_at = 0.0;
    if (gamma.states.front().x < kSqrt2) {
        const auto s = locate_on(
            gamma, gamma.states.front().s, gamma.states.back().s,
            [](const PlanarState& p) { return p.x - kSqrt2; }, 1e-14);
        if (!s) {
            return not_applicable(id, b, "could not locate x = sqrt 2");
        }
        slope_at = std::abs(std::tan(dense_state(gamma, *s).theta));
    }
    const auto samples = gamma_samples(d, 1e-6);
    for (const auto& p : samples) {
        if (p.x <= kSqrt2) {
            slope_at = std::max(slope_at, std::abs(std::tan(p.theta)));
        }
    }
    const double third_bound = std::sqrt(3.0) / 3.0;
    if (slope_at > third_bound) {
        return not_applicable(id, b,
                              "hypothesis fails: max |gamma'| on [0, sqrt 2] is " + fmt(slope_at));
    }

    double worst = -kInf;
    for (const auto& p : samples) {
        const double gp = std::tan(p.theta);
        const double gpp = graph_x_rhs(p.x, p.z, gp, d.params);
        worst = std::max(worst, third_fourth_derivatives(p.x, p.z, gp, gpp, 0.0, d.params).third);
    }
    return evaluate(id, b, worst, 0.0, -worst, true, 0.0);
}

std::vector<BoundReport> verify_height(double b, const ShrinkerParams& params,
                                       const StepperConfig& config, const ShootingOptions& opts) {
    const auto d = trace_profile(b, params, config, opts);
    std::vector<BoundReport> out = check_first_branch(d);
    if (b <= small_height_threshold()) {
        auto more = check_small_b(d);
        out.insert(out.end(), more.begin(), more.end());
    }
    auto second = check_second_branch(d);
    out.insert(out.end(), second.begin(), second.end());
    out.push_back(check_divergence_form(d));
    auto cont = check_continuity(b, 1e-3 * b, params, config, opts);
    out.insert(out.end(), cont.begin(), cont.end());
    out.push_back(check_third_derivative_sign(d));
    return out;
}

double curve_ode_residual(const ClosedCurve& curve, const ShrinkerParams& params, double ds) {
    if (!(ds > 0.0)) {
        throw DomainError("curve_ode_residual: ds must be positive");
    }
    const double axis = 1e-8;
    std::vector<PlanarState> filled;
    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PlanarState p{pts[i].x, pts[i].z, pts[i].theta, pts[i].s};
        if (p.x <= axis) {
            continue;
        }
        filled.push_back(p);
        if (i + 1 == pts.size()) {
            break;
        }
        const double h = pts[i + 1].s - p.s;
        for (int k = 1; k * ds < h - 0.5 * ds; ++k) {
            if (const auto q = rk_step(p, k * ds, params)) {
                filled.push_back(*q);
            }
        }
    }
    return ode_residual(filled, params);
}

}  // namespace shrinker
