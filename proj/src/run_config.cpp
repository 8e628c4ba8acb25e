#include "shrinker/run_config.hpp"

#include "shrinker/curve_io.hpp"
#include "shrinker/errors.hpp"

#include <charconv>
#include <sstream>

namespace shrinker {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + std::string(key) + "': not a number: '" +
                          std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + std::string(key) + "': not an integer: '" +
                          std::string(text) + "'");
    }
    return v;
}

double positive(std::string_view key, double v) {
    if (!(v > 0.0)) {
        throw ConfigError("config key '" + std::string(key) + "' must be positive");
    }
    return v;
}

}  // namespace

ShrinkerParams RunConfig::params() const {
    ShrinkerParams p;
    p.n = n;
    return p;
}

StepperConfig RunConfig::stepper() const {
    StepperConfig c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.max_step = max_step;
    c.event_tol = event_tol;
    c.s_max = s_max;
    c.x_max = x_max;
    c.x_min = x_min;
    return c;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "n") {
        cfg.n = parse_int(key, value);
        if (cfg.n < 2) {
            throw ConfigError("config key 'n' must be at least 2");
        }
    } else if (key == "rel_tol") {
        cfg.rel_tol = positive(key, parse_real(key, value));
    } else if (key == "abs_tol") {
        cfg.abs_tol = positive(key, parse_real(key, value));
    } else if (key == "max_step") {
        cfg.max_step = positive(key, parse_real(key, value));
    } else if (key == "event_tol") {
        cfg.event_tol = positive(key, parse_real(key, value));
    } else if (key == "s_max") {
        cfg.s_max = positive(key, parse_real(key, value));
    } else if (key == "x_max") {
        cfg.x_max = positive(key, parse_real(key, value));
    } else if (key == "x_min") {
        cfg.x_min = positive(key, parse_real(key, value));
    } else if (key == "b") {
        cfg.b = positive(key, parse_real(key, value));
    } else if (key == "bracket_lo") {
        cfg.bracket_lo = parse_real(key, value);
    } else if (key == "bracket_hi") {
        cfg.bracket_hi = parse_real(key, value);
    } else if (key == "out") {
        cfg.out_dir = std::string(value);
    } else if (key == "segments") {
        cfg.segments = parse_int(key, value);
        if (cfg.segments < 8) {
            throw ConfigError("config key 'segments' must be at least 8");
        }
    } else if (key == "samples") {
        cfg.samples = parse_int(key, value);
        if (cfg.samples < 4) {
            throw ConfigError("config key 'samples' must be at least 4");
        }
    } else if (key == "plot_width") {
        cfg.plot_width = parse_int(key, value);
    } else if (key == "plot_height") {
        cfg.plot_height = parse_int(key, value);
    } else if (key == "target") {
        if (value != "sphere" && value != "torus" && value != "round") {
            throw ConfigError("config key 'target' must be sphere, torus or round");
        }
        cfg.target = std::string(value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        try {
            set_config_value(cfg, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse_run_config(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string format_run_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "n = " << cfg.n << "\n";
    os << "rel_tol = " << format_double(cfg.rel_tol) << "\n";
    os << "abs_tol = " << format_double(cfg.abs_tol) << "\n";
    os << "max_step = " << format_double(cfg.max_step) << "\n";
    os << "event_tol = " << format_double(cfg.event_tol) << "\n";
    os << "s_max = " << format_double(cfg.s_max) << "\n";
    os << "x_max = " << format_double(cfg.x_max) << "\n";
    os << "x_min = " << format_double(cfg.x_min) << "\n";
    os << "b = " << format_double(cfg.b) << "\n";
    if (cfg.bracket_lo) {
        os << "bracket_lo = " << format_double(*cfg.bracket_lo) << "\n";
    }
    if (cfg.bracket_hi) {
        os << "bracket_hi = " << format_double(*cfg.bracket_hi) << "\n";
    }
    if (!cfg.out_dir.empty()) {
        os << "out = " << cfg.out_dir << "\n";
    }
    os << "segments = " << cfg.segments << "\n";
    os << "samples = " << cfg.samples << "\n";
    os << "plot_width = " << cfg.plot_width << "\n";
    os << "plot_height = " << cfg.plot_height << "\n";
    os << "target = " << cfg.target << "\n";
    return os.str();
}

}  // namespace shrinker
