#include "shrinker/integrator.hpp"

#include "shrinker/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace shrinker {

void StepperConfig::validate() const {
    const bool positive = rel_tol > 0 && abs_tol > 0 && max_step > 0 && event_tol > 0 &&
                          s_max > 0 && x_max > 0 && x_min > 0;
    if (!positive) {
        throw DomainError("stepper configuration values must all be positive");
    }
    if (event_tol > abs_tol) {
        throw DomainError("event_tol must not exceed abs_tol");
    }
    if (!std::isfinite(s_max)) {
        throw DomainError("s_max must be finite");
    }
}

StepperConfig StepperConfig::tightened(double factor) const {
    StepperConfig c = *this;
    c.rel_tol /= factor;
    c.abs_tol /= factor;
    c.event_tol = std::min(c.event_tol, c.abs_tol);
    return c;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::VerticalTangent: return "VerticalTangent";
    case EventKind::HorizontalTangent: return "HorizontalTangent";
    case EventKind::AxisCrossing: return "AxisCrossing";
    case EventKind::NearAxis: return "NearAxis";
    case EventKind::RadialGuard: return "RadialGuard";
    case EventKind::ArcBudget: return "ArcBudget";
    }
    return "Unknown";
}

std::vector<Event> Trajectory::events_of(EventKind kind) const {
    std::vector<Event> out;
    for (const auto& e : events) {
        if (e.kind == kind) {
            out.push_back(e);
        }
    }
    return out;
}

PlanarState reversed(const PlanarState& state) {
    return {state.x, state.z, state.theta + std::numbers::pi, state.s};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB5{35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0};
constexpr std::array<double, 7> kB4{5179.0 / 57600,     0,           7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

using Vec3 = std::array<double, 3>;

struct StepResult {
    PlanarState next;
    Vec3 error{};
};

std::optional<StepResult> dp_step(const PlanarState& y, double h, const ShrinkerParams& params,
                                  bool with_error) {
    std::array<Vec3, 7> k{};
    const int stages = with_error ? 7 : 6;
    for (int i = 0; i < stages; ++i) {
        PlanarState st = y;
        for (int j = 0; j < i; ++j) {
            st.x += h * kA[i][j] * k[j][0];
            st.z += h * kA[i][j] * k[j][1];
            st.theta += h * kA[i][j] * k[j][2];
        }
        if (!(st.x > params.axis_epsilon)) {
            return std::nullopt;
        }
        const auto d = arclength_rhs(st, params);
        k[i] = {d.dx, d.dz, d.dtheta};
    }
    StepResult r;
    r.next = y;
    for (int i = 0; i < 6; ++i) {
        r.next.x += h * kB5[i] * k[i][0];
        r.next.z += h * kB5[i] * k[i][1];
        r.next.theta += h * kB5[i] * k[i][2];
    }
    r.next.s = y.s + h;
    if (with_error) {
        for (int c = 0; c < 3; ++c) {
            double e = 0.0;
            for (int i = 0; i < 7; ++i) {
                e += (kB5[i] - kB4[i]) * k[i][c];
            }
            r.error[c] = h * e;
        }
    }
    return r;
}

constexpr std::size_t kEventFunctions = 5;
constexpr std::array<EventKind, kEventFunctions> kEventKinds{
    EventKind::VerticalTangent, EventKind::HorizontalTangent, EventKind::AxisCrossing,
    EventKind::NearAxis,        EventKind::RadialGuard};

double event_value(std::size_t i, const PlanarState& y, const StepperConfig& config) {
    switch (i) {
    case 0: return std::cos(y.theta);
    case 1: return std::sin(y.theta);
    case 2: return y.z;
    case 3: return y.x - config.x_min;
    default: return config.x_max - y.x;
    }
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

bool is_guard(EventKind k) {
    return k == EventKind::NearAxis || k == EventKind::RadialGuard || k == EventKind::ArcBudget;
}

// Bisection on the step length tau in (0, h] for a sign change of event i.
double refine_event(const PlanarState& y0, double h, std::size_t i, int start_sign,
                    const ShrinkerParams& params, const StepperConfig& config) {
    double lo = 0.0;
    double hi = h;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const auto r = dp_step(y0, mid, params, false);
        if (!r) {
            hi = mid;
            continue;
        }
        const double g = event_value(i, r->next, config);
        if (std::abs(g) <= config.event_tol) {
            return mid;
        }
        if (sign_of(g) == start_sign) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

struct EventArming {
    std::array<int, kEventFunctions> sign{};

    void arm_from(const PlanarState& y, const StepperConfig& config) {
        for (std::size_t i = 0; i < kEventFunctions; ++i) {
            const double g = event_value(i, y, config);
            if (sign[i] == 0 && std::abs(g) > config.event_tol) {
                sign[i] = sign_of(g);
            }
        }
    }
};

void integrate_into(Trajectory& traj, const PlanarState& start, EventMask stop_on) {
    const auto& params = traj.params;
    const auto& config = traj.config;
    params.validate();
    config.validate();
    if (!(start.x > config.x_min)) {
        throw DomainError("integrate: start.x must exceed x_min");
    }

    EventArming arming;
    arming.arm_from(start, config);

    PlanarState y = start;
    if (traj.states.empty() || traj.states.back().s < y.s) {
        traj.states.push_back(y);
    }
    if (y.s >= config.s_max) {
        traj.events.push_back({EventKind::ArcBudget, y});
        traj.stopped_by_request = stop_on.contains(EventKind::ArcBudget);
        return;
    }

    double h = std::min(config.max_step, 1e-3);
    const double max_dtheta = std::numbers::pi / 8.0;

    while (true) {
        const double remaining = config.s_max - y.s;
        bool clipped = false;
        if (h >= remaining) {
            h = remaining;
            clipped = true;
        }
        const double h_floor = 1e-14 * std::max(1.0, std::abs(y.s));
        if (h < h_floor) {
            throw StepFailure("step size underflow at s = " + std::to_string(y.s) +
                              ", x = " + std::to_string(y.x) + ", z = " + std::to_string(y.z));
        }

        const auto trial = dp_step(y, h, params, true);
        if (!trial) {
            h *= 0.25;
            continue;
        }
        const auto& next = trial->next;
        const std::array<double, 3> cur{y.x, y.z, y.theta};
        const std::array<double, 3> nxt{next.x, next.z, next.theta};
        double err = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double sc =
                config.abs_tol + config.rel_tol * std::max(std::abs(cur[c]), std::abs(nxt[c]));
            err += (trial->error[c] / sc) * (trial->error[c] / sc);
        }
        err = std::sqrt(err / 3.0);
        const bool turn_ok = std::abs(next.theta - y.theta) < max_dtheta;

        if (!(err <= 1.0) || !turn_ok) {
            const double factor =
                std::isfinite(err) && err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0)
                                              : 0.2;
            h *= turn_ok ? factor : 0.5;
            continue;
        }

        // Accepted step: look for event sign changes in (y, next].
        struct Found {
            double tau;
            std::size_t index;
        };
        std::vector<Found> found;
        for (std::size_t i = 0; i < kEventFunctions; ++i) {
            if (arming.sign[i] == 0) {
                continue;
            }
            const double g1 = event_value(i, next, config);
            if (std::abs(g1) <= config.event_tol) {
                found.push_back({h, i});
            } else if (sign_of(g1) != arming.sign[i]) {
                found.push_back({refine_event(y, h, i, arming.sign[i], params, config), i});
            }
        }
        std::sort(found.begin(), found.end(),
                  [](const Found& a, const Found& b) { return a.tau < b.tau; });

        for (const auto& f : found) {
            const EventKind kind = kEventKinds[f.index];
            PlanarState at = next;
            if (f.tau != h) {
                if (const auto r = dp_step(y, f.tau, params, false)) {
                    at = r->next;
                }
            }
            traj.events.push_back({kind, at});
            arming.sign[f.index] = 0;
            if (stop_on.contains(kind) || is_guard(kind)) {
                if (at.s > traj.states.back().s) {
                    traj.states.push_back(at);
                }
                traj.stopped_by_request = stop_on.contains(kind);
                return;
            }
        }

        y = next;
        traj.states.push_back(y);
        arming.arm_from(y, config);

        if (clipped) {
            traj.events.push_back({EventKind::ArcBudget, y});
            traj.stopped_by_request = stop_on.contains(EventKind::ArcBudget);
            return;
        }

        const double grow = err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h = std::min(h * grow, config.max_step);
    }
}

}  // namespace

std::optional<PlanarState> rk_step(const PlanarState& from, double h,
                                   const ShrinkerParams& params) {
    const auto r = dp_step(from, h, params, false);
    if (!r) {
        return std::nullopt;
    }
    return r->next;
}

Trajectory integrate(const PlanarState& start, const ShrinkerParams& params,
                     const StepperConfig& config, EventMask stop_on) {
    Trajectory traj;
    traj.params = params;
    traj.config = config;
    integrate_into(traj, start, stop_on);
    return traj;
}

Trajectory continue_through(const Trajectory& traj, const ShrinkerParams& params,
                            const StepperConfig& config, EventMask stop_on) {
    if (traj.events.empty()) {
        throw DomainError("continue_through: trajectory has no terminal event");
    }
    const EventKind last = traj.stop_event().kind;
    if (last == EventKind::ArcBudget) {
        return traj;
    }
    if (last != EventKind::VerticalTangent && last != EventKind::HorizontalTangent) {
        throw DomainError("continue_through: trajectory must end at a tangent event, not " +
                          std::string(to_string(last)));
    }
    Trajectory out = traj;
    out.params = params;
    out.config = config;
    integrate_into(out, traj.states.back(), stop_on);
    return out;
}

PlanarState dense_state(const Trajectory& traj, double s) {
    const auto& st = traj.states;
    if (st.empty()) {
        throw DomainError("dense_state: empty trajectory");
    }
    if (s <= st.front().s) {
        return st.front();
    }
    if (s >= st.back().s) {
        return st.back();
    }
    auto it = std::upper_bound(st.begin(), st.end(), s,
                               [](double v, const PlanarState& p) { return v < p.s; });
    const PlanarState& node = *(it - 1);
    const double tau = s - node.s;
    if (tau == 0.0) {
        return node;
    }
    auto r = dp_step(node, tau, traj.params, false);
    if (!r) {
        // Stage fell onto the axis; fall back to linear interpolation.
        const PlanarState& nx = *it;
        const double w = tau / (nx.s - node.s);
        return {node.x + w * (nx.x - node.x), node.z + w * (nx.z - node.z),
                node.theta + w * (nx.theta - node.theta), s};
    }
    r->next.s = s;
    return r->next;
}

std::vector<PlanarState> resample_uniform(const Trajectory& traj, double ds) {
    if (!(ds > 0.0)) {
        throw DomainError("resample_uniform: ds must be positive");
    }
    std::vector<PlanarState> out;
    if (traj.states.empty()) {
        return out;
    }
    const double s0 = traj.states.front().s;
    const double s1 = traj.states.back().s;
    const auto count = static_cast<std::size_t>(std::floor((s1 - s0) / ds));
    out.reserve(count + 2);
    for (std::size_t i = 0; i <= count; ++i) {
        out.push_back(dense_state(traj, s0 + static_cast<double>(i) * ds));
    }
    if (s1 - out.back().s > 1e-3 * ds) {
        out.push_back(traj.states.back());
    }
    return out;
}

std::optional<double> locate_on(const Trajectory& traj, double s_lo, double s_hi,
                                const std::function<double(const PlanarState&)>& fn,
                                double tol) {
    double g_lo = fn(dense_state(traj, s_lo));
    const double g_hi = fn(dense_state(traj, s_hi));
    if (g_lo == 0.0) {
        return s_lo;
    }
    if (g_hi == 0.0) {
        return s_hi;
    }
    if (sign_of(g_lo) == sign_of(g_hi)) {
        return std::nullopt;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (mid <= s_lo || mid >= s_hi) {
            break;
        }
        const double g = fn(dense_state(traj, mid));
        if (std::abs(g) <= tol) {
            return mid;
        }
        if (sign_of(g) == sign_of(g_lo)) {
            s_lo = mid;
            g_lo = g;
        } else {
            s_hi = mid;
        }
    }
    return 0.5 * (s_lo + s_hi);
}

}  // namespace shrinker
