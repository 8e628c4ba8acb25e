#pragma once

#include "shrinker/profile_ode.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

namespace shrinker {

struct StepperConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.05;
    double event_tol = 1e-12;
    /// Absolute arc-length coordinate at which integration stops.
    double s_max = 100.0;
    double x_max = 50.0;
    double x_min = 1e-6;

    void validate() const;
    /// Same configuration with rel_tol and abs_tol divided by `factor`.
    StepperConfig tightened(double factor) const;
};

enum class EventKind : std::uint8_t {
    VerticalTangent,
    HorizontalTangent,
    AxisCrossing,
    NearAxis,
    RadialGuard,
    ArcBudget,
};

std::string_view to_string(EventKind kind);

/// Set of event kinds.
class EventMask {
public:
    constexpr EventMask() = default;
    constexpr EventMask(std::initializer_list<EventKind> kinds) {
        for (auto k : kinds) {
            bits_ |= bit(k);
        }
    }
    constexpr bool contains(EventKind k) const { return (bits_ & bit(k)) != 0; }

private:
    static constexpr std::uint32_t bit(EventKind k) {
        return std::uint32_t{1} << static_cast<unsigned>(k);
    }
    std::uint32_t bits_ = 0;
};

struct Event {
    EventKind kind = EventKind::ArcBudget;
    PlanarState state;
};

struct Trajectory {
    std::vector<PlanarState> states;
    /// Every detected event in order of arc length; the last one is the stop.
    std::vector<Event> events;
    ShrinkerParams params;
    StepperConfig config;
    /// True when the final event was in stop_on; false for guard stops.
    bool stopped_by_request = false;

    const Event& stop_event() const { return events.back(); }
    bool guard_hit() const { return !stopped_by_request; }
    std::vector<Event> events_of(EventKind kind) const;
};

/// Integrates the arc-length system from `start` until an event in `stop_on`
/// or a guard (NearAxis, RadialGuard, ArcBudget).  Event functions are
/// cos(theta), sin(theta), z, x - x_min and x_max - x; a function that is
/// within event_tol of zero at the start is armed only after it leaves that band.
/// Throws StepFailure if the step size underflows.
Trajectory integrate(const PlanarState& start, const ShrinkerParams& params,
                     const StepperConfig& config, EventMask stop_on);

/// Resumes from the final state of `traj` and appends states and events.
/// Requires the trajectory to end at a VerticalTangent or HorizontalTangent;
/// a trajectory that already exhausted its arc budget is returned unchanged.
Trajectory continue_through(const Trajectory& traj, const ShrinkerParams& params,
                            const StepperConfig& config, EventMask stop_on);

/// One Dormand-Prince step of length h (fifth-order solution).  Returns
/// nullopt if a stage would land within axis_epsilon of the axis.
std::optional<PlanarState> rk_step(const PlanarState& from, double h,
                                   const ShrinkerParams& params);

/// State at arc length s, by a single step from the preceding stored state.
PlanarState dense_state(const Trajectory& traj, double s);

/// Samples from the first to the last stored state with spacing ds (the last
/// interval may be shorter).
std::vector<PlanarState> resample_uniform(const Trajectory& traj, double ds);

/// Arc length in [s_lo, s_hi] where fn(dense_state(s)) changes sign, located by
/// bisection to |fn| <= tol.  Returns nullopt if fn has equal signs at the ends.
std::optional<double> locate_on(const Trajectory& traj, double s_lo, double s_hi,
                                const std::function<double(const PlanarState&)>& fn,
                                double tol);

/// The same geometric point traversed in the opposite direction.
PlanarState reversed(const PlanarState& state);

}  // namespace shrinker
