#pragma once

// Angles read off shape coordinates.
//
// With V = sqrt(3) tan(theta/2) the apex angle alpha of the chosen cluster
// obeys  cot(alpha) = (V^2 - 1) / (2 V |sin phi|).  The authoritative path is
// reconstruct + planar angles; the closed form is kept as a cross-check.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "euclid.hpp"
#include "shape_map.hpp"

namespace shapesphere {

inline const double kSqrt3 = std::sqrt(3.0);

/// V = sqrt(3) tan(theta/2); V = 1 exactly on the rightness circle theta = pi/3.
inline double v_of_theta(double theta) {
    if (!(theta >= 0.0 && theta < kPi)) throw std::domain_error("V undefined: theta must lie in [0, pi)");
    return kSqrt3 * std::tan(0.5 * theta);
}

struct ConstantK {
    double alpha;
    double k;  // cot(alpha)

    static ConstantK of(double alpha) {
        if (!(alpha > 0.0 && alpha < kPi)) throw std::domain_error("alpha must lie in (0, pi)");
        // cos(pi/2) is not exactly zero in floating point.
        const double k = alpha == kPi / 2 ? 0.0 : std::cos(alpha) / std::sin(alpha);
        return {alpha, k};
    }
};

/// Planar angle at the cluster apex, via the reconstructed triangle.
inline double apex_angle_from_shape(const ShapeCoords& s) {
    if (!s.phi_defined) throw ShapeError("apex angle undefined at a pole");
    const auto t = reconstruct(s);
    const auto d = degeneracy(t);
    if (d.kind != DegeneracyKind::nondegenerate)
        throw DegenerateTriangleError(d, "apex angle degenerate on the collinearity circle");
    return vertex_angles(t)[s.cluster.apex()];
}

/// Closed-form cot law; uses |sin phi| so both orientations give the
/// geometric angle.
inline double apex_angle_cot_law(const ShapeCoords& s) {
    const double v = v_of_theta(s.theta);
    const double sp = std::abs(std::sin(s.phi));
    // cot a = (V^2-1)/(2 V sp)  =>  a = atan2(2 V sp, V^2 - 1)
    return std::atan2(2.0 * v * sp, v * v - 1.0);
}

struct MaxAngleField {
    double alpha_max;
    std::vector<ClusterId> achieving;
};

/// Maximal angle over the three vertices. Collinear non-collision shapes give
/// pi; binary collisions (B points) are undefined and throw.
inline MaxAngleField max_angle_from_shape(const ShapeCoords& s) {
    const auto t = reconstruct(s);
    const auto d = degeneracy(t);
    if (d.kind == DegeneracyKind::binary_collision || d.kind == DegeneracyKind::triple_collision)
        throw DegenerateTriangleError(d, "maximal angle undefined at a binary collision");
    const auto angles = vertex_angles(t);
    const auto m = max_angle(angles);
    MaxAngleField out{m.value, {}};
    for (auto v : m.vertices) out.achieving.push_back(cluster_of_apex(v));
    return out;
}

/// All three planar angles of a shape, indexed by cluster apex.
inline AngleSet angles_from_shape(const ShapeCoords& s) {
    return vertex_angles(reconstruct(s));
}

enum class CapRelation { inside_obtuse_cap, on_cap_circle, acute_region };

struct CapMembership {
    CapRelation relation;
    std::vector<ClusterId> clusters;  // caps entered / circles touched
};

inline CapMembership right_cap_membership(const ShapeCoords& s, double tol = kAngleTolerance) {
    CapMembership inside{CapRelation::inside_obtuse_cap, {}};
    CapMembership on{CapRelation::on_cap_circle, {}};
    for (auto k : kClusters) {
        const double theta = relabel(s, k).theta;
        if (std::abs(theta - kPi / 3) <= tol) on.clusters.push_back(k);
        else if (theta < kPi / 3) inside.clusters.push_back(k);
    }
    if (!inside.clusters.empty()) return inside;
    if (!on.clusters.empty()) return on;
    return {CapRelation::acute_region, {}};
}

}  // namespace shapesphere
