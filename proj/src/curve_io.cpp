#include "shrinker/curve_io.hpp"

#include "shrinker/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace shrinker {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = "s,x,z,theta,branch\n";
    out.reserve(points.size() * 96);
    for (const auto& p : points) {
        out += format_double(p.s);
        out += ',';
        out += format_double(p.x);
        out += ',';
        out += format_double(p.z);
        out += ',';
        out += format_double(p.theta);
        out += ',';
        out += to_string(p.branch);
        out += '\n';
    }
    return out;
}

void write_curve_csv(const std::vector<CurvePoint>& points, const fs::path& path) {
    if (points.empty()) {
        throw IoError("refusing to write an empty curve to " + path.string());
    }
    write_file_atomic(path, curve_csv(points));
}

void write_curve_csv(const ClosedCurve& curve, const fs::path& path) {
    write_curve_csv(curve.points, path);
}

std::vector<CurvePoint> parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "s,x,z,theta,branch") {
        throw IoError("curve CSV: missing or unexpected header");
    }
    std::vector<CurvePoint> out;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string cell[5];
        for (int i = 0; i < 5; ++i) {
            if (!std::getline(fields, cell[i], ',')) {
                throw IoError("curve CSV: row " + std::to_string(row) + " has too few fields");
            }
        }
        CurvePoint p;
        try {
            p.s = std::stod(cell[0]);
            p.x = std::stod(cell[1]);
            p.z = std::stod(cell[2]);
            p.theta = std::stod(cell[3]);
        } catch (const std::exception&) {
            throw IoError("curve CSV: row " + std::to_string(row) + " has a malformed number");
        }
        p.branch = branch_from_string(cell[4]);
        out.push_back(p);
    }
    return out;
}

std::vector<CurvePoint> read_curve_csv(const fs::path& path) {
    try {
        return parse_curve_csv(read_file(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

json to_json(const PlanarState& st) {
    return json{{"s", st.s}, {"x", st.x}, {"z", st.z}, {"theta", st.theta}};
}

json to_json(const Event& e) {
    json j = to_json(e.state);
    j["kind"] = std::string(to_string(e.kind));
    return j;
}

json to_json(const std::vector<Event>& events) {
    json arr = json::array();
    for (const auto& e : events) {
        arr.push_back(to_json(e));
    }
    return arr;
}

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const BranchDecomposition& d) {
    json j;
    j["b"] = d.b;
    j["n"] = d.params.n;
    j["reached_first_tangent"] = d.reached_first_tangent;
    j["beta_end"] = std::string(to_string(d.beta_end));
    j["outcome"] = std::string(to_string(classify(d)));
    j["x_star"] = d.x_star;
    j["z_star"] = d.z_star;
    j["x_m"] = optional_number(d.x_m);
    j["z_m"] = optional_number(d.z_m);
    j["x_star2"] = optional_number(d.x_star2);
    j["z_star2"] = optional_number(d.z_star2);
    j["x_zero"] = optional_number(d.x_zero);
    j["x_one"] = optional_number(d.x_one);
    j["seed"] = {{"M", d.seed.M},
                 {"growth_constant", d.seed.growth_constant},
                 {"patch_radius", d.seed.patch_radius}};
    j["gamma_events"] = to_json(d.gamma_branch.events);
    j["beta_events"] = to_json(d.beta_branch.events);
    return j;
}

json to_json(const ShootReport& r) {
    json j;
    j["target"] = std::string(to_string(r.target));
    j["root"] = r.root;
    j["iterations"] = r.iterations;
    j["closure_residual"] = r.closure_residual;
    json history = json::array();
    for (const auto& step : r.bracket_history) {
        history.push_back({{"low", step.low},
                           {"high", step.high},
                           {"outcome_low", step.outcome_low},
                           {"outcome_high", step.outcome_high}});
    }
    j["bracket_history"] = std::move(history);
    json crossings = json::array();
    for (const auto& c : r.self_intersections) {
        crossings.push_back({{"x", c.x},
                             {"z", c.z},
                             {"s_first", c.s_first},
                             {"s_second", c.s_second},
                             {"angle", c.angle}});
    }
    j["self_intersections"] = std::move(crossings);
    j["closed_curve"] = {{"points", r.closed_curve.points.size()},
                         {"loop", r.closed_curve.loop},
                         {"length", r.closed_curve.length()}};
    if (r.decomposition) {
        j["decomposition"] = to_json(*r.decomposition);
    }
    if (r.torus_half) {
        j["torus_events"] = to_json(r.torus_half->events);
    }
    return j;
}

json to_json(const BoundReport& r) {
    return json{{"claim_id", r.claim_id},
                {"b", r.b},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"margin", r.margin},
                {"verdict", std::string(to_string(r.verdict))},
                {"pass", r.pass()},
                {"strict", r.strict},
                {"expected_fail", r.expected_fail},
                {"note", r.note}};
}

json to_json(const std::vector<BoundReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
    }
    return arr;
}

void write_json(const json& doc, const fs::path& path) {
    write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace shrinker
