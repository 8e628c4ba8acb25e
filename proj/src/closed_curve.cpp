#include "shrinker/closed_curve.hpp"

#include "shrinker/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace shrinker {

std::string_view to_string(Branch branch) {
    switch (branch) {
    case Branch::Gamma: return "gamma";
    case Branch::Beta: return "beta";
    case Branch::GammaRef: return "gamma_ref";
    case Branch::BetaRef: return "beta_ref";
    case Branch::Torus: return "torus";
    }
    return "gamma";
}

Branch branch_from_string(std::string_view name) {
    for (auto b : {Branch::Gamma, Branch::Beta, Branch::GammaRef, Branch::BetaRef, Branch::Torus}) {
        if (to_string(b) == name) {
            return b;
        }
    }
    throw IoError("unknown branch label '" + std::string(name) + "'");
}

std::vector<CurvePoint> tag_states(const std::vector<PlanarState>& states, Branch branch) {
    std::vector<CurvePoint> out;
    out.reserve(states.size());
    for (const auto& p : states) {
        out.push_back({p.s, p.x, p.z, p.theta, branch});
    }
    return out;
}

namespace {

Branch mirrored(Branch b) {
    switch (b) {
    case Branch::Gamma: return Branch::GammaRef;
    case Branch::Beta: return Branch::BetaRef;
    case Branch::GammaRef: return Branch::Gamma;
    case Branch::BetaRef: return Branch::Beta;
    case Branch::Torus: return Branch::Torus;
    }
    return b;
}

}  // namespace

ClosedCurve mirror_about_end(const std::vector<CurvePoint>& half, bool loop) {
    ClosedCurve curve;
    curve.loop = loop;
    if (half.empty()) {
        return curve;
    }
    curve.points = half;
    const CurvePoint& junction = half.back();
    for (std::size_t i = half.size() - 1; i-- > 0;) {
        const CurvePoint& p = half[i];
        curve.points.push_back({2.0 * junction.s - p.s, p.x, -p.z, 2.0 * junction.theta - p.theta,
                                mirrored(p.branch)});
    }
    return curve;
}

std::vector<Crossing> count_self_intersections(const ClosedCurve& curve) {
    std::vector<Crossing> out;
    const auto& p = curve.points;
    if (p.size() < 4) {
        return out;
    }
    const std::size_t segs = p.size() - 1;

    // Bounding boxes let most pairs be rejected cheaply.
    struct Box {
        double x0, x1, z0, z1;
    };
    std::vector<Box> boxes(segs);
    for (std::size_t i = 0; i < segs; ++i) {
        boxes[i] = {std::min(p[i].x, p[i + 1].x), std::max(p[i].x, p[i + 1].x),
                    std::min(p[i].z, p[i + 1].z), std::max(p[i].z, p[i + 1].z)};
    }

    for (std::size_t i = 0; i < segs; ++i) {
        for (std::size_t j = i + 2; j < segs; ++j) {
            if (curve.loop && i == 0 && j == segs - 1) {
                continue;
            }
            const Box& a = boxes[i];
            const Box& b = boxes[j];
            if (a.x1 < b.x0 || b.x1 < a.x0 || a.z1 < b.z0 || b.z1 < a.z0) {
                continue;
            }
            const double rx = p[i + 1].x - p[i].x;
            const double rz = p[i + 1].z - p[i].z;
            const double qx = p[j + 1].x - p[j].x;
            const double qz = p[j + 1].z - p[j].z;
            const double denom = rx * qz - rz * qx;
            if (denom == 0.0) {
                continue;
            }
            const double wx = p[j].x - p[i].x;
            const double wz = p[j].z - p[i].z;
            const double t = (wx * qz - wz * qx) / denom;
            const double u = (wx * rz - wz * rx) / denom;
            // Half-open parameter ranges so a crossing through a shared vertex counts once.
            if (t < 0.0 || t >= 1.0 || u < 0.0 || u >= 1.0) {
                continue;
            }
            Crossing c;
            c.x = p[i].x + t * rx;
            c.z = p[i].z + t * rz;
            c.s_first = p[i].s + t * (p[i + 1].s - p[i].s);
            c.s_second = p[j].s + u * (p[j + 1].s - p[j].s);
            const double cosang =
                std::abs(rx * qx + rz * qz) / (std::hypot(rx, rz) * std::hypot(qx, qz));
            c.angle = std::acos(std::clamp(cosang, 0.0, 1.0));
            out.push_back(c);
        }
    }
    return out;
}

int axis_touchpoints(const ClosedCurve& curve, double tol) {
    int count = 0;
    for (const auto& q : curve.points) {
        if (q.x <= tol) {
            ++count;
        }
    }
    return count;
}

std::vector<PlanarState> to_states(const ClosedCurve& curve) {
    std::vector<PlanarState> out;
    out.reserve(curve.points.size());
    for (const auto& q : curve.points) {
        out.push_back({q.x, q.z, q.theta, q.s});
    }
    return out;
}

}  // namespace shrinker
