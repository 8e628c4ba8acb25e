#include "shrinker/mesh.hpp"

#include "shrinker/curve_io.hpp"
#include "shrinker/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace shrinker {

namespace {

// Linear interpolation of the polyline at arc length s.
CurvePoint point_at(const std::vector<CurvePoint>& pts, double s) {
    auto it = std::upper_bound(pts.begin(), pts.end(), s,
                               [](double v, const CurvePoint& p) { return v < p.s; });
    if (it == pts.begin()) {
        return pts.front();
    }
    if (it == pts.end()) {
        return pts.back();
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (s - lo.s) / (hi.s - lo.s);
    CurvePoint p = lo;
    p.s = s;
    p.x = lo.x + t * (hi.x - lo.x);
    p.z = lo.z + t * (hi.z - lo.z);
    p.theta = lo.theta + t * (hi.theta - lo.theta);
    return p;
}

}  // namespace

MeshSpec build_mesh(const ClosedCurve& profile, const MeshOptions& opts) {
    const int seg = opts.azimuthal_segments;
    const int samples = opts.profile_samples;
    if (seg < 8) {
        throw DomainError("build_mesh: need at least 8 azimuthal segments");
    }
    if (samples < 4) {
        throw DomainError("build_mesh: need at least 4 profile samples");
    }
    const auto& pts = profile.points;
    if (pts.size() < 2) {
        throw DomainError("build_mesh: profile has fewer than two points");
    }

    MeshSpec mesh;
    mesh.azimuthal_segments = seg;
    const double s0 = pts.front().s;
    const double length = pts.back().s - s0;

    std::vector<CurvePoint> rings;
    if (profile.loop) {
        for (int i = 0; i < samples; ++i) {
            rings.push_back(point_at(pts, s0 + length * i / samples));
        }
        const auto closest = std::min_element(
            rings.begin(), rings.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
        if (closest->x <= opts.axis_tol) {
            throw DomainError("build_mesh: loop profile touches the rotation axis");
        }
    } else {
        if (pts.front().x > opts.axis_tol || pts.back().x > opts.axis_tol) {
            throw ClosureFailure("build_mesh: open profile must start and end on the axis");
        }
        for (int i = 0; i < samples; ++i) {
            rings.push_back(point_at(pts, s0 + length * i / (samples - 1)));
        }
    }
    mesh.profile = rings;

    auto ring_vertex = [seg](int base, int ring, int j) { return base + ring * seg + (j % seg); };
    const double dphi = 2.0 * std::numbers::pi / seg;

    if (profile.loop) {
        for (const auto& p : rings) {
            for (int j = 0; j < seg; ++j) {
                mesh.vertices.push_back({p.x * std::cos(j * dphi), p.x * std::sin(j * dphi), p.z});
            }
        }
        for (int i = 0; i < samples; ++i) {
            const int next = (i + 1) % samples;
            for (int j = 0; j < seg; ++j) {
                const int a = ring_vertex(0, i, j);
                const int b = ring_vertex(0, next, j);
                const int c = ring_vertex(0, next, j + 1);
                const int d = ring_vertex(0, i, j + 1);
                mesh.faces.push_back({a, b, c});
                mesh.faces.push_back({a, c, d});
            }
        }
        return mesh;
    }

    // Poles first, then the interior rings.
    const auto& top = rings.front();
    const auto& bottom = rings.back();
    mesh.vertices.push_back({0.0, 0.0, top.z});
    mesh.vertices.push_back({0.0, 0.0, bottom.z});
    mesh.pole_count = 2;
    const int interior = samples - 2;
    for (int i = 1; i <= interior; ++i) {
        const auto& p = rings[static_cast<std::size_t>(i)];
        for (int j = 0; j < seg; ++j) {
            mesh.vertices.push_back({p.x * std::cos(j * dphi), p.x * std::sin(j * dphi), p.z});
        }
    }
    const int base = 2;
    for (int j = 0; j < seg; ++j) {
        mesh.faces.push_back({0, ring_vertex(base, 0, j), ring_vertex(base, 0, j + 1)});
    }
    for (int i = 0; i + 1 < interior; ++i) {
        for (int j = 0; j < seg; ++j) {
            const int a = ring_vertex(base, i, j);
            const int b = ring_vertex(base, i + 1, j);
            const int c = ring_vertex(base, i + 1, j + 1);
            const int d = ring_vertex(base, i, j + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    }
    const int last = interior - 1;
    for (int j = 0; j < seg; ++j) {
        mesh.faces.push_back({1, ring_vertex(base, last, j + 1), ring_vertex(base, last, j)});
    }
    return mesh;
}

int euler_characteristic(const MeshSpec& mesh) {
    std::set<std::pair<int, int>> edges;
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const int u = f[static_cast<std::size_t>(k)];
            const int v = f[static_cast<std::size_t>((k + 1) % 3)];
            edges.insert({std::min(u, v), std::max(u, v)});
        }
    }
    return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(mesh.faces.size());
}

bool is_closed_oriented(const MeshSpec& mesh) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const int u = f[static_cast<std::size_t>(k)];
            const int v = f[static_cast<std::size_t>((k + 1) % 3)];
            if (u == v || ++directed[{u, v}] > 1) {
                return false;
            }
        }
    }
    for (const auto& [edge, count] : directed) {
        if (!directed.contains({edge.second, edge.first})) {
            return false;
        }
    }
    return true;
}

std::string mesh_obj(const MeshSpec& mesh) {
    std::string out = "# surface of revolution about the z-axis\n";
    out += "# vertices " + std::to_string(mesh.vertices.size()) + " faces " +
           std::to_string(mesh.faces.size()) + "\n";
    for (const auto& v : mesh.vertices) {
        out += "v " + format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]) +
               "\n";
    }
    for (const auto& f : mesh.faces) {
        out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
               std::to_string(f[2] + 1) + "\n";
    }
    return out;
}

void write_mesh(const MeshSpec& mesh, const std::filesystem::path& path) {
    write_file_atomic(path, mesh_obj(mesh));
}

}  // namespace shrinker
