#pragma once

#include "shrinker/closed_curve.hpp"
#include "shrinker/integrator.hpp"
#include "shrinker/shooting.hpp"
#include "shrinker/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace shrinker {

/// Writes `content` to a sibling temporary file and renames it over `path`, so
/// readers never observe a partial file.  Throws IoError with the path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// %.17g: enough digits for a lossless round trip.
std::string format_double(double v);

/// CSV with header s,x,z,theta,branch and LF line endings.
std::string curve_csv(const std::vector<CurvePoint>& points);
void write_curve_csv(const std::vector<CurvePoint>& points, const std::filesystem::path& path);
void write_curve_csv(const ClosedCurve& curve, const std::filesystem::path& path);

std::vector<CurvePoint> parse_curve_csv(const std::string& text);
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

nlohmann::json to_json(const PlanarState& state);
nlohmann::json to_json(const Event& event);
nlohmann::json to_json(const std::vector<Event>& events);
nlohmann::json to_json(const BranchDecomposition& decomp);
nlohmann::json to_json(const ShootReport& report);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const std::vector<BoundReport>& reports);

/// Two-space indented JSON followed by a newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace shrinker
