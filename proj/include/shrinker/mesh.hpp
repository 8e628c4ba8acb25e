#pragma once

#include "shrinker/closed_curve.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace shrinker {

/// Triangulated surface of revolution about the z-axis.
struct MeshSpec {
    /// Resampled profile the rings were built from.
    std::vector<CurvePoint> profile;
    int azimuthal_segments = 0;
    std::vector<std::array<double, 3>> vertices;
    /// Zero-based vertex indices, all triangles oriented the same way.
    std::vector<std::array<int, 3>> faces;
    /// Vertices on the rotation axis (polar fans); zero for a torus.
    int pole_count = 0;
};

struct MeshOptions {
    int azimuthal_segments = 64;
    int profile_samples = 200;
    /// Profile ends closer to the axis than this are treated as poles.
    double axis_tol = 1e-9;
};

/// Rotates a closed profile.  A profile whose two ends sit on the axis closes
/// with one pole vertex and a triangle fan at each end; a loop profile gives a
/// torus.  Throws ClosureFailure for an open profile that misses the axis, and
/// DomainError for a loop that touches the axis or too few segments/samples.
MeshSpec build_mesh(const ClosedCurve& profile, const MeshOptions& opts = {});

int euler_characteristic(const MeshSpec& mesh);

/// Every undirected edge lies on exactly two faces, used once in each direction.
bool is_closed_oriented(const MeshSpec& mesh);

/// Wavefront OBJ text: vertex lines, then faces with one-based indices.
std::string mesh_obj(const MeshSpec& mesh);
void write_mesh(const MeshSpec& mesh, const std::filesystem::path& path);

}  // namespace shrinker
