#include "shrinker/shooting.hpp"

#include "shrinker/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

namespace shrinker {

std::string_view to_string(BetaEnd end) {
    switch (end) {
    case BetaEnd::SecondVerticalTangent: return "SecondVerticalTangent";
    case BetaEnd::AxisArrival: return "AxisArrival";
    case BetaEnd::Guard: return "Guard";
    case BetaEnd::NotReached: return "NotReached";
    }
    return "NotReached";
}

std::string_view to_string(OutcomeTag tag) {
    switch (tag) {
    case OutcomeTag::MinThenPositive: return "MinThenPositive";
    case OutcomeTag::MinThenNegative: return "MinThenNegative";
    case OutcomeTag::NoMin: return "NoMin";
    case OutcomeTag::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string_view to_string(ShootTarget target) {
    return target == ShootTarget::Sphere ? "sphere" : "torus";
}

BranchDecomposition trace_profile(double b, const ShrinkerParams& params,
                                  const StepperConfig& config, const ShootingOptions& opts) {
    params.validate();
    config.validate();
    if (!(b > 0.0) || b > opts.b_max) {
        std::ostringstream msg;
        msg << "initial height " << b << " outside the validated range (0, " << opts.b_max << "]";
        throw SeedRangeError(msg.str());
    }

    BranchDecomposition d;
    d.b = b;
    d.params = params;
    d.seed = make_seed(b, params, opts.seed);
    d.seed_segment = seed_samples(d.seed, opts.seed_samples);
    const PlanarState launch = launch_state(d.seed);

    d.gamma_branch = integrate(launch, params, config, {EventKind::VerticalTangent});
    const auto& gamma = d.gamma_branch;
    for (const auto& e : gamma.events) {
        if (e.kind == EventKind::AxisCrossing) {
            d.x_zero = e.state.x;
            break;
        }
    }
    if (!gamma.stopped_by_request) {
        return d;
    }
    d.reached_first_tangent = true;
    const PlanarState star = gamma.states.back();
    d.x_star = star.x;
    d.z_star = star.z;

    const double quarter = -std::numbers::pi / 4.0;
    if (launch.theta > quarter) {
        const auto s1 = locate_on(
            gamma, launch.s, star.s, [quarter](const PlanarState& p) { return p.theta - quarter; },
            1e-14);
        if (s1) {
            d.x_one = dense_state(gamma, *s1).x;
        }
    }

    // Second branch: stop at the first horizontal tangent to vet it, then go on
    // to the next vertical tangent.
    Trajectory beta = integrate(star, params, config,
                                {EventKind::VerticalTangent, EventKind::HorizontalTangent});
    if (beta.stopped_by_request && beta.stop_event().kind == EventKind::HorizontalTangent) {
        const PlanarState m = beta.stop_event().state;
        if (m.x < opts.axis_zone) {
            d.beta_branch = std::move(beta);
            d.beta_end = BetaEnd::AxisArrival;
            return d;
        }
        d.x_m = m.x;
        d.z_m = m.z;
        beta = continue_through(beta, params, config, {EventKind::VerticalTangent});
    }
    d.beta_branch = std::move(beta);
    const Event& end = d.beta_branch.stop_event();
    if (d.beta_branch.stopped_by_request && end.kind == EventKind::VerticalTangent) {
        d.beta_end = BetaEnd::SecondVerticalTangent;
        d.x_star2 = end.state.x;
        d.z_star2 = end.state.z;
    } else if (end.kind == EventKind::NearAxis) {
        d.beta_end = BetaEnd::AxisArrival;
    } else {
        d.beta_end = BetaEnd::Guard;
    }
    return d;
}

OutcomeTag classify(const BranchDecomposition& d) {
    if (!d.reached_first_tangent || d.beta_end == BetaEnd::Guard ||
        d.beta_end == BetaEnd::NotReached) {
        return OutcomeTag::Indeterminate;
    }
    if (!d.x_m) {
        return OutcomeTag::NoMin;
    }
    if (d.beta_end != BetaEnd::SecondVerticalTangent || !d.z_star2) {
        return OutcomeTag::Indeterminate;
    }
    return *d.z_star2 > d.beta_branch.config.event_tol ? OutcomeTag::MinThenPositive
                                                        : OutcomeTag::MinThenNegative;
}

namespace {

void append_after(std::vector<CurvePoint>& out, const std::vector<CurvePoint>& more) {
    for (const auto& p : more) {
        if (out.empty() || p.s > out.back().s) {
            out.push_back(p);
        }
    }
}

std::vector<CurvePoint> first_branch_points(const BranchDecomposition& d) {
    std::vector<CurvePoint> half = tag_states(d.seed_segment, Branch::Gamma);
    append_after(half, tag_states(d.gamma_branch.states, Branch::Gamma));
    return half;
}

}  // namespace

ClosedCurve assemble_closed_curve(const BranchDecomposition& d, double closure_tol) {
    if (!d.reached_first_tangent) {
        throw ClosureFailure("first branch never reached a vertical tangent");
    }
    std::vector<CurvePoint> half = first_branch_points(d);
    double junction_height = d.z_star;
    if (d.x_m) {
        if (!d.z_star2) {
            throw ClosureFailure("second branch has no closing vertical tangent");
        }
        append_after(half, tag_states(d.beta_branch.states, Branch::Beta));
        junction_height = *d.z_star2;
    }
    if (std::abs(junction_height) > 10.0 * closure_tol) {
        std::ostringstream msg;
        msg << "junction height " << junction_height << " exceeds closure tolerance";
        throw ClosureFailure(msg.str());
    }
    return mirror_about_end(half, false);
}

namespace {

struct Probe {
    double b;
    OutcomeTag tag;
    BranchDecomposition decomp;
};

Probe probe(double b, const ShrinkerParams& params, const StepperConfig& config,
            const ShootingOptions& opts) {
    auto d = trace_profile(b, params, config, opts);
    const auto tag = classify(d);
    return {b, tag, std::move(d)};
}

std::string format_bracket(double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << lo << ", " << hi << "]";
    return os.str();
}

// Secant estimate of the root of f inside [lo, hi], clamped to the bracket.
double secant_in_bracket(double lo, double f_lo, double hi, double f_hi) {
    if (f_hi == f_lo) {
        return 0.5 * (lo + hi);
    }
    const double r = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    return std::clamp(r, lo, hi);
}

}  // namespace

ShootReport find_sphere_height(const ShrinkerParams& params, const StepperConfig& config,
                               std::pair<double, double> bracket, const ShootingOptions& opts) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0) || !(lo < hi)) {
        throw BracketInvalid("sphere bracket must satisfy 0 < low < high");
    }
    Probe p_lo = probe(lo, params, config, opts);
    Probe p_hi = probe(hi, params, config, opts);
    if (p_lo.tag != OutcomeTag::MinThenPositive) {
        throw BracketInvalid("lower end " + std::to_string(lo) + " classifies as " +
                             std::string(to_string(p_lo.tag)) + ", expected MinThenPositive");
    }
    if (p_hi.tag == OutcomeTag::MinThenPositive || p_hi.tag == OutcomeTag::Indeterminate) {
        throw BracketInvalid("upper end " + std::to_string(hi) + " classifies as " +
                             std::string(to_string(p_hi.tag)));
    }

    ShootReport report;
    report.target = ShootTarget::Sphere;
    report.bracket_history.push_back(
        {lo, hi, std::string(to_string(p_lo.tag)), std::string(to_string(p_hi.tag))});

    while (hi - lo > opts.b_tol) {
        if (report.iterations >= opts.max_iterations) {
            throw NoConvergence("bisection iteration limit reached; best bracket " +
                                format_bracket(lo, hi));
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        Probe p = probe(mid, params, config, opts);
        ++report.iterations;
        if (p.tag == OutcomeTag::Indeterminate) {
            throw NoConvergence("indeterminate outcome at b = " + std::to_string(mid) +
                                "; best bracket " + format_bracket(lo, hi));
        }
        if (p.tag == OutcomeTag::MinThenPositive) {
            lo = mid;
            p_lo = std::move(p);
        } else {
            hi = mid;
            p_hi = std::move(p);
        }
        report.bracket_history.push_back(
            {lo, hi, std::string(to_string(p_lo.tag)), std::string(to_string(p_hi.tag))});
    }

    // The closure height z** is finite on both sides only when the upper end
    // also has a horizontal tangent; polish with one secant step there.
    std::vector<Probe*> candidates{&p_lo};
    Probe polished{};
    if (p_hi.tag == OutcomeTag::MinThenNegative && p_hi.decomp.z_star2 && p_lo.decomp.z_star2) {
        const double r = secant_in_bracket(lo, *p_lo.decomp.z_star2, hi, *p_hi.decomp.z_star2);
        polished = probe(r, params, config, opts);
        candidates.push_back(&p_hi);
        if (polished.decomp.z_star2) {
            candidates.push_back(&polished);
        }
    }
    Probe* best = candidates.front();
    for (Probe* c : candidates) {
        if (c->decomp.z_star2 && std::abs(*c->decomp.z_star2) < std::abs(*best->decomp.z_star2)) {
            best = c;
        }
    }
    const double residual = std::abs(best->decomp.z_star2.value_or(INFINITY));
    if (!(residual <= opts.closure_tol)) {
        std::ostringstream msg;
        msg << "closure residual " << residual << " above tolerance " << opts.closure_tol
            << "; best bracket " << format_bracket(lo, hi);
        throw NoConvergence(msg.str());
    }

    report.root = best->b;
    report.closure_residual = residual;
    report.closed_curve = assemble_closed_curve(best->decomp, opts.closure_tol);
    report.self_intersections = count_self_intersections(report.closed_curve);
    report.decomposition = std::move(best->decomp);
    return report;
}

TorusShot shoot_torus(double r, const ShrinkerParams& params, const StepperConfig& config) {
    if (!(r > config.x_min)) {
        throw DomainError("torus start radius must exceed x_min");
    }
    TorusShot shot;
    shot.r = r;
    const PlanarState start{r, 0.0, std::numbers::pi / 2.0, 0.0};
    shot.trajectory = integrate(start, params, config, {EventKind::VerticalTangent});
    if (shot.trajectory.stopped_by_request) {
        shot.height = shot.trajectory.stop_event().state.z;
    }
    return shot;
}

namespace {

std::string torus_label(const TorusShot& s) {
    if (!s.height) {
        return "NoVerticalTangent";
    }
    return *s.height > 0 ? "T>0" : (*s.height < 0 ? "T<0" : "T=0");
}

}  // namespace

ShootReport find_torus_radius(const ShrinkerParams& params, const StepperConfig& config,
                              std::pair<double, double> bracket, const ShootingOptions& opts) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0) || !(lo < hi)) {
        throw BracketInvalid("torus bracket must satisfy 0 < low < high");
    }
    TorusShot s_lo = shoot_torus(lo, params, config);
    TorusShot s_hi = shoot_torus(hi, params, config);
    if (!s_lo.height || !s_hi.height || (*s_lo.height > 0) == (*s_hi.height > 0)) {
        throw BracketInvalid("torus shooting function does not change sign on " +
                             format_bracket(lo, hi) + " (" + torus_label(s_lo) + ", " +
                             torus_label(s_hi) + ")");
    }

    ShootReport report;
    report.target = ShootTarget::Torus;
    report.bracket_history.push_back({lo, hi, torus_label(s_lo), torus_label(s_hi)});
    const bool lo_positive = *s_lo.height > 0;

    while (hi - lo > opts.r_tol) {
        if (report.iterations >= opts.max_iterations) {
            throw NoConvergence("torus bisection iteration limit reached; best bracket " +
                                format_bracket(lo, hi));
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        TorusShot s = shoot_torus(mid, params, config);
        ++report.iterations;
        if (!s.height) {
            throw NoConvergence("no vertical tangent at r = " + std::to_string(mid));
        }
        if ((*s.height > 0) == lo_positive) {
            lo = mid;
            s_lo = std::move(s);
        } else {
            hi = mid;
            s_hi = std::move(s);
        }
        report.bracket_history.push_back({lo, hi, torus_label(s_lo), torus_label(s_hi)});
    }

    TorusShot polished = shoot_torus(secant_in_bracket(lo, *s_lo.height, hi, *s_hi.height),
                                     params, config);
    TorusShot* best = std::abs(*s_lo.height) <= std::abs(*s_hi.height) ? &s_lo : &s_hi;
    if (polished.height && std::abs(*polished.height) < std::abs(*best->height)) {
        best = &polished;
    }
    const double residual = std::abs(*best->height);
    if (!(residual <= opts.closure_tol)) {
        std::ostringstream msg;
        msg << "torus closure residual " << residual << " above tolerance " << opts.closure_tol;
        throw NoConvergence(msg.str());
    }

    report.root = best->r;
    report.closure_residual = residual;
    report.closed_curve = mirror_about_end(tag_states(best->trajectory.states, Branch::Torus), true);
    report.self_intersections = count_self_intersections(report.closed_curve);
    report.torus_half = std::move(best->trajectory);
    return report;
}

PredicateSweep sweep_predicate(const std::vector<double>& heights, const ShrinkerParams& params,
                               const StepperConfig& config, const ShootingOptions& opts) {
    PredicateSweep sweep;
    sweep.b = heights;
    sweep.tags.assign(heights.size(), OutcomeTag::Indeterminate);

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < heights.size(); i += workers) {
                sweep.tags[i] = classify(trace_profile(heights[i], params, config, opts));
            }
        }));
    }
    for (auto& j : jobs) {
        j.get();
    }

    for (std::size_t i = 1; i < heights.size(); ++i) {
        const bool a = sweep.tags[i - 1] == OutcomeTag::MinThenPositive;
        const bool b = sweep.tags[i] == OutcomeTag::MinThenPositive;
        if (a != b) {
            sweep.transitions.emplace_back(heights[i - 1], heights[i]);
        }
    }
    sweep.single_interval = !sweep.tags.empty() &&
                            sweep.tags.front() == OutcomeTag::MinThenPositive &&
                            sweep.transitions.size() <= 1;
    return sweep;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) {
        return out;
    }
    if (count == 1) {
        return {lo};
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) {
        if (i == 0) {
            out.push_back(lo);
        } else if (i == count - 1) {
            out.push_back(hi);
        } else {
            out.push_back(std::exp(a + (b - a) * i / (count - 1)));
        }
    }
    return out;
}

}  // namespace shrinker
