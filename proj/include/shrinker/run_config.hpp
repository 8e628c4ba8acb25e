#pragma once

#include "shrinker/integrator.hpp"
#include "shrinker/profile_ode.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace shrinker {

/// Settings shared by every subcommand.  The file form is one `key = value`
/// per line; `#` starts a comment.  Keys match the field names, except `out`
/// for out_dir.
struct RunConfig {
    int n = 2;
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.05;
    double event_tol = 1e-12;
    double s_max = 100.0;
    double x_max = 50.0;
    double x_min = 1e-6;
    double b = 1.0;
    std::optional<double> bracket_lo;
    std::optional<double> bracket_hi;
    std::string out_dir;
    int segments = 64;
    int samples = 200;
    int plot_width = 640;
    int plot_height = 640;
    /// sphere, torus or round: which profile mesh and plot act on.
    std::string target = "sphere";

    bool operator==(const RunConfig&) const = default;

    ShrinkerParams params() const;
    StepperConfig stepper() const;
};

/// Sets one key from its text value.  Throws ConfigError for unknown keys and
/// malformed or out-of-range values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Every key, in a fixed order, with values that parse back exactly.
std::string format_run_config(const RunConfig& cfg);

}  // namespace shrinker
