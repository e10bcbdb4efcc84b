#pragma once

// Jacobi coordinates and the triangle shape sphere.
//
// Cluster k uses vertex k as apex and the other two as base pair, in cyclic
// order: cluster 1 = base (B, C), apex A; cluster 2 = base (C, A), apex B;
// cluster 3 = base (A, B), apex C.
//
//   R1 = q_second - q_first        (base separation)
//   R2 = q_apex - (q_first + q_second) / 2   (median)
//   rho_i = sqrt(mu_i) R_i,  mu1 = 1/2, mu2 = 2/3
//
// Shape coordinates: theta = 2 atan(|rho2| / |rho1|) measured from U (theta=0,
// apex at the base midpoint) to B (theta=pi, base pair coincident); phi is the
// counterclockwise angle from rho1 to rho2 in (-pi, pi].

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "euclid.hpp"

namespace shapesphere {

class ClusterId {
public:
    constexpr ClusterId() = default;
    constexpr explicit ClusterId(int id) : id_(id) {
        if (id < 1 || id > 3) throw std::out_of_range("cluster id must be 1, 2 or 3");
    }
    constexpr int value() const { return id_; }
    constexpr ClusterId next() const { return ClusterId(id_ % 3 + 1); }
    constexpr ClusterId prev() const { return ClusterId((id_ + 1) % 3 + 1); }
    constexpr Vertex apex() const { return static_cast<Vertex>(id_ - 1); }
    constexpr Vertex base_first() const { return static_cast<Vertex>(id_ % 3); }
    constexpr Vertex base_second() const { return static_cast<Vertex>((id_ + 1) % 3); }
    constexpr bool operator==(const ClusterId&) const = default;

private:
    int id_ = 1;
};

inline constexpr std::array<ClusterId, 3> kClusters{ClusterId(1), ClusterId(2), ClusterId(3)};

inline ClusterId cluster_of_apex(Vertex v) { return ClusterId(static_cast<int>(v) + 1); }

struct JacobiVectors {
    Vec2 r1, r2;
    ClusterId cluster;
};

struct MassWeightedJacobi {
    Vec2 rho1, rho2;
    ClusterId cluster;
};

inline const double kSqrtMu1 = std::sqrt(0.5);
inline const double kSqrtMu2 = std::sqrt(2.0 / 3.0);

inline JacobiVectors jacobi(const PlanarTriangle& t, ClusterId k) {
    const Vec2 p = t[k.base_first()];
    const Vec2 q = t[k.base_second()];
    return {q - p, t[k.apex()] - (p + q) * 0.5, k};
}

inline MassWeightedJacobi mass_weight(const JacobiVectors& j) {
    return {j.r1 * kSqrtMu1, j.r2 * kSqrtMu2, j.cluster};
}

struct ShapeCoords {
    double theta = 0.0;
    double phi = 0.0;
    ClusterId cluster{};
    bool phi_defined = true;  // false at the poles theta = 0 (U) and theta = pi (B)
};

/// Unit vector on the shape sphere, in the frame of the cluster the
/// coordinates were taken in.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(Vec3 v) { return v * (1.0 / norm(v)); }

using ShapeVector = Vec3;

class ShapeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline ShapeCoords shape_coords(const PlanarTriangle& t, ClusterId k) {
    const auto deg = degeneracy(t);
    if (deg.kind == DegeneracyKind::triple_collision)
        throw ShapeError("shape coordinates undefined for a triple collision");
    const auto m = mass_weight(jacobi(t, k));
    const double n1 = norm(m.rho1);
    const double n2 = norm(m.rho2);
    const double scale = std::max(n1, n2);
    if (n1 <= kDegeneracyTolerance * scale) return {kPi, 0.0, k, false};
    if (n2 <= kDegeneracyTolerance * scale) return {0.0, 0.0, k, false};
    const double theta = 2.0 * std::atan2(n2, n1);
    double phi = std::atan2(cross(m.rho1, m.rho2), dot(m.rho1, m.rho2));
    if (phi == -kPi) phi = kPi;
    return {theta, phi, k, true};
}

/// Canonical representative: rho1 = (1, 0), base pair at -/+ R1/2 about the
/// origin, apex at R2. At the B pole (theta = pi) the base has zero length, so
/// rho2 = (1, 0) is used instead.
inline PlanarTriangle reconstruct(const ShapeCoords& s) {
    const double phi = s.phi_defined ? s.phi : 0.0;
    Vec2 rho1{1.0, 0.0};
    Vec2 rho2;
    if (s.theta >= kPi) {
        rho1 = {0.0, 0.0};
        rho2 = {std::cos(phi), std::sin(phi)};
    } else {
        const double r = std::tan(0.5 * s.theta);
        rho2 = Vec2{std::cos(phi), std::sin(phi)} * r;
    }
    const Vec2 r1 = rho1 / kSqrtMu1;
    const Vec2 r2 = rho2 / kSqrtMu2;
    PlanarTriangle t{};
    t[s.cluster.base_first()] = r1 * -0.5;
    t[s.cluster.base_second()] = r1 * 0.5;
    t[s.cluster.apex()] = r2;
    return t;
}

inline ShapeCoords relabel(const ShapeCoords& s, ClusterId to) {
    if (s.cluster == to) return s;
    return shape_coords(reconstruct(s), to);
}

inline ShapeVector embed(const ShapeCoords& s) {
    const double phi = s.phi_defined ? s.phi : 0.0;
    const double st = std::sin(s.theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(s.theta)};
}

/// Inverse of embed; poles (within 1e-15 of the axis) come back flagged.
inline ShapeCoords from_vector(const ShapeVector& v, ClusterId k) {
    const Vec3 u = normalized(v);
    const double rho = std::hypot(u.x, u.y);
    const double theta = std::atan2(rho, u.z);
    if (rho <= 1e-15) return {theta, 0.0, k, false};
    double phi = std::atan2(u.y, u.x);
    if (phi == -kPi) phi = kPi;
    return {theta, phi, k, true};
}

inline double chordal_distance(const ShapeCoords& a, const ShapeCoords& b) {
    const ShapeCoords bb = relabel(b, a.cluster);
    return norm(embed(a) - embed(bb));
}

/// Rotation by angle about the E axis (the +y axis of a cluster frame).
inline Vec3 rotate_about_e_axis(Vec3 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

enum class SpecialTag { E, Ebar, B, U, H };

struct SpecialShape {
    SpecialTag tag;
    ClusterId cluster{};  // ignored for E and Ebar

    std::string name() const {
        switch (tag) {
            case SpecialTag::E: return "E";
            case SpecialTag::Ebar: return "Ebar";
            case SpecialTag::B: return "B" + std::to_string(cluster.value());
            case SpecialTag::U: return "U" + std::to_string(cluster.value());
            default: return "H" + std::to_string(cluster.value());
        }
    }
};

/// Special shapes in cluster-1 coordinates.
inline ShapeCoords special_point(const SpecialShape& p) {
    const ClusterId c1(1);
    switch (p.tag) {
        case SpecialTag::E: return {kPi / 2, kPi / 2, c1, true};
        case SpecialTag::Ebar: return {kPi / 2, -kPi / 2, c1, true};
        case SpecialTag::B:
            switch (p.cluster.value()) {
                case 1: return {kPi, 0.0, c1, false};
                case 2: return {kPi / 3, 0.0, c1, true};
                default: return {kPi / 3, kPi, c1, true};
            }
        case SpecialTag::U:
            if (p.cluster.value() == 1) return {0.0, 0.0, c1, false};
            return relabel({0.0, 0.0, p.cluster, false}, c1);
        case SpecialTag::H:
            if (p.cluster.value() == 1) return {kPi / 2, 0.0, c1, true};
            return relabel({kPi / 2, 0.0, p.cluster, true}, c1);
    }
    return {};
}

inline std::array<SpecialShape, 11> special_catalog() {
    using T = SpecialTag;
    return {{{T::E},
             {T::Ebar},
             {T::B, ClusterId(1)},
             {T::B, ClusterId(2)},
             {T::B, ClusterId(3)},
             {T::U, ClusterId(1)},
             {T::U, ClusterId(2)},
             {T::U, ClusterId(3)},
             {T::H, ClusterId(1)},
             {T::H, ClusterId(2)},
             {T::H, ClusterId(3)}}};
}

}  // namespace shapesphere
