#pragma once

// Planar triangle geometry: sides, angles, degeneracy, maximal angle and
// the Fermat (Torricelli) point.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapesphere {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

enum class Vertex { A = 0, B = 1, C = 2 };

inline char label(Vertex v) { return "ABC"[static_cast<int>(v)]; }

inline constexpr std::array<Vertex, 3> kVertices{Vertex::A, Vertex::B, Vertex::C};

/// Three labelled vertices. Labels are identities: nothing in the library
/// permutes them implicitly.
struct PlanarTriangle {
    Vec2 a, b, c;

    Vec2 operator[](Vertex v) const {
        switch (v) {
            case Vertex::A: return a;
            case Vertex::B: return b;
            default: return c;
        }
    }
    Vec2& operator[](Vertex v) {
        switch (v) {
            case Vertex::A: return a;
            case Vertex::B: return b;
            default: return c;
        }
    }

    bool finite() const {
        return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(b.x) &&
               std::isfinite(b.y) && std::isfinite(c.x) && std::isfinite(c.y);
    }
};

/// Side lengths, each opposite its vertex.
struct SideLengths {
    double a, b, c;
};

/// Angles at A, B, C in radians.
struct AngleSet {
    double a, b, c;

    double operator[](Vertex v) const {
        switch (v) {
            case Vertex::A: return a;
            case Vertex::B: return b;
            default: return c;
        }
    }
    double sum() const { return a + b + c; }
};

struct MaxAngle {
    double value;
    std::vector<Vertex> vertices;  // every vertex attaining the maximum
};

// Classification comparisons against a threshold angle.
inline constexpr double kAngleTolerance = 1e-9;
// Degeneracy: parallelogram area / diameter^2 and pair distance / diameter.
inline constexpr double kDegeneracyTolerance = 1e-12;

enum class DegeneracyKind { nondegenerate, collinear, binary_collision, triple_collision };

struct Degeneracy {
    DegeneracyKind kind = DegeneracyKind::nondegenerate;
    // Coincident pair for binary collisions.
    std::array<Vertex, 2> pair{Vertex::A, Vertex::B};
};

/// Thrown for operations that need a non-degenerate (or non-colliding) triangle.
class DegenerateTriangleError : public std::domain_error {
public:
    DegenerateTriangleError(Degeneracy d, const std::string& what)
        : std::domain_error(what), degeneracy_(d) {}
    const Degeneracy& degeneracy() const { return degeneracy_; }

private:
    Degeneracy degeneracy_;
};

inline SideLengths side_lengths(const PlanarTriangle& t) {
    return {norm(t.c - t.b), norm(t.a - t.c), norm(t.b - t.a)};
}

inline Degeneracy degeneracy(const PlanarTriangle& t) {
    const auto s = side_lengths(t);
    const double diameter = std::max({s.a, s.b, s.c});
    if (diameter == 0.0) return {DegeneracyKind::triple_collision, {Vertex::A, Vertex::B}};
    const double eps = kDegeneracyTolerance * diameter;
    if (s.c <= eps) return {DegeneracyKind::binary_collision, {Vertex::A, Vertex::B}};
    if (s.a <= eps) return {DegeneracyKind::binary_collision, {Vertex::B, Vertex::C}};
    if (s.b <= eps) return {DegeneracyKind::binary_collision, {Vertex::A, Vertex::C}};
    const double area2 = std::abs(cross(t.b - t.a, t.c - t.a));
    if (area2 <= kDegeneracyTolerance * diameter * diameter)
        return {DegeneracyKind::collinear, {Vertex::A, Vertex::B}};
    return {};
}

inline std::string describe(const Degeneracy& d) {
    switch (d.kind) {
        case DegeneracyKind::nondegenerate: return "nondegenerate";
        case DegeneracyKind::collinear: return "collinear";
        case DegeneracyKind::triple_collision: return "triple_collision";
        case DegeneracyKind::binary_collision:
            return std::string("binary_collision(") + label(d.pair[0]) + label(d.pair[1]) + ")";
    }
    return "unknown";
}

namespace detail {
// Unsigned angle at p between rays to q and r, atan2 form.
inline double angle_at(Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 u = q - p;
    const Vec2 w = r - p;
    const Vec2 un = u / norm(u);
    const Vec2 wn = w / norm(w);
    return std::abs(std::atan2(cross(un, wn), dot(un, wn)));
}
}  // namespace detail

/// Interior angles. Collinear input gives exactly {0, 0, pi} with pi at the
/// middle vertex; collisions throw.
inline AngleSet vertex_angles(const PlanarTriangle& t) {
    const auto d = degeneracy(t);
    if (d.kind == DegeneracyKind::triple_collision || d.kind == DegeneracyKind::binary_collision)
        throw DegenerateTriangleError(d, "vertex angles undefined: " + describe(d));
    if (d.kind == DegeneracyKind::collinear) {
        // The middle vertex sees the other two in opposite directions.
        AngleSet out{0.0, 0.0, 0.0};
        if (dot(t.b - t.a, t.c - t.a) < 0) out.a = kPi;
        else if (dot(t.a - t.b, t.c - t.b) < 0) out.b = kPi;
        else out.c = kPi;
        return out;
    }
    return {detail::angle_at(t.a, t.b, t.c), detail::angle_at(t.b, t.c, t.a),
            detail::angle_at(t.c, t.a, t.b)};
}

inline MaxAngle max_angle(const AngleSet& angles, double tol = kAngleTolerance) {
    const double m = std::max({angles.a, angles.b, angles.c});
    MaxAngle out{m, {}};
    for (auto v : kVertices)
        if (angles[v] >= m - tol) out.vertices.push_back(v);
    return out;
}

enum class AlphaClass { acute, critical, obtuse };

inline const char* to_string(AlphaClass c) {
    switch (c) {
        case AlphaClass::acute: return "acute";
        case AlphaClass::critical: return "critical";
        default: return "obtuse";
    }
}

/// Trichotomy of the maximal angle against a threshold alpha in [pi/3, pi].
inline AlphaClass classify_alpha(const AngleSet& angles, double alpha) {
    if (!(alpha >= kPi / 3 - kAngleTolerance && alpha <= kPi + kAngleTolerance))
        throw std::domain_error("alpha must lie in [pi/3, pi]");
    const double m = max_angle(angles).value;
    if (std::abs(m - alpha) <= kAngleTolerance) return AlphaClass::critical;
    return m < alpha ? AlphaClass::acute : AlphaClass::obtuse;
}

inline constexpr double kFermatAngle = 2.0 * std::numbers::pi / 3.0;

inline AlphaClass classify_fermat(const AngleSet& angles) {
    return classify_alpha(angles, kFermatAngle);
}

struct FermatResult {
    Vec2 point;
    double total_distance;
    bool at_vertex;
    Vertex vertex = Vertex::A;  // meaningful when at_vertex
};

inline double distance_sum(const PlanarTriangle& t, Vec2 p) {
    return norm(t.a - p) + norm(t.b - p) + norm(t.c - p);
}

/// Fermat point. Obtuse-vertex shortcut when the maximal angle is at least
/// 2pi/3, otherwise damped Weiszfeld iteration from the centroid.
inline FermatResult fermat_point(const PlanarTriangle& t) {
    const auto d = degeneracy(t);
    if (d.kind != DegeneracyKind::nondegenerate)
        throw DegenerateTriangleError(d, "Fermat point requires a nondegenerate triangle: " +
                                             describe(d));
    const auto angles = vertex_angles(t);
    const auto m = max_angle(angles);
    if (classify_fermat(angles) != AlphaClass::acute) {
        const Vertex v = m.vertices.front();
        return {t[v], distance_sum(t, t[v]), true, v};
    }

    const auto s = side_lengths(t);
    const double diameter = std::max({s.a, s.b, s.c});
    const double stop = 1e-12 * diameter;
    Vec2 x = (t.a + t.b + t.c) / 3.0;
    for (int iter = 0; iter < 10000; ++iter) {
        Vec2 num{};
        double den = 0.0;
        for (auto v : kVertices) {
            // Interior optimum for Fermat-acute input, so distances stay
            // positive; the floor only guards a pathological landing.
            const double dist = std::max(norm(t[v] - x), 1e-300);
            num = num + t[v] / dist;
            den += 1.0 / dist;
        }
        const Vec2 target = num / den;
        // Damped step: accept the Weiszfeld update unless it fails to
        // decrease the objective, then halve.
        Vec2 next = target;
        double step = 1.0;
        const double f0 = distance_sum(t, x);
        while (distance_sum(t, next) > f0 && step > 1e-6) {
            step *= 0.5;
            next = x + (target - x) * step;
        }
        const double moved = norm(next - x);
        x = next;
        if (moved < stop) break;
    }
    return {x, distance_sum(t, x), false, Vertex::A};
}

}  // namespace shapesphere
