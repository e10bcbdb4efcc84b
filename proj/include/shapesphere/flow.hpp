#pragma once

// Constant-angle curves and maximal-angle contours on the shape sphere.
//
// For fixed alpha, with k = cot(alpha), the cot law
//     V^2 - 2 k |sin phi| V - 1 = 0,   V = sqrt(3) tan(theta/2)
// has roots with product -1, so exactly one root V+ is positive. Curves are
// parameterized by phi through V+; the arcsin form in theta is kept as a
// consistency check (phi_of_theta).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "angle_law.hpp"
#include "euclid.hpp"
#include "shape_map.hpp"

namespace shapesphere {

inline constexpr int kDefaultArcSamples = 512;
// alpha within this of pi/3, pi/2 or pi is treated as that special value.
inline constexpr double kSpecialAlphaTolerance = 1e-12;

enum class Hemisphere { upper, lower, equator, full };

inline const char* to_string(Hemisphere h) {
    switch (h) {
        case Hemisphere::upper: return "upper";
        case Hemisphere::lower: return "lower";
        case Hemisphere::equator: return "equator";
        default: return "full";
    }
}

enum class EndpointFlag { b_point_excluded, tall_isosceles_turning, pole, cusp, closed };

inline const char* to_string(EndpointFlag f) {
    switch (f) {
        case EndpointFlag::b_point_excluded: return "B_point_excluded";
        case EndpointFlag::tall_isosceles_turning: return "tall_isosceles_turning";
        case EndpointFlag::pole: return "pole";
        case EndpointFlag::cusp: return "cusp";
        default: return "closed";
    }
}

struct CurveSample {
    double theta, phi, x;  // x = cos(theta)
};

struct ConstantAngleCurve {
    double alpha;
    ClusterId cluster;
    Hemisphere hemisphere;
    std::vector<CurveSample> samples;
    std::array<EndpointFlag, 2> endpoint_flags;
};

/// Positive root of V^2 - 2 k s V - 1 = 0 for s = |sin phi| >= 0, evaluated
/// without cancellation for either sign of k.
inline double v_plus(double k, double s) {
    const double ks = k * s;
    const double r = std::hypot(ks, 1.0);
    return ks >= 0.0 ? ks + r : 1.0 / (r - ks);
}

inline double theta_from_v(double v) { return 2.0 * std::atan(v / kSqrt3); }

/// theta on the constant-alpha curve of the cluster apex at azimuth phi.
inline double theta_of_phi(double alpha, double phi) {
    if (!(alpha > kPi / 3 - kSpecialAlphaTolerance && alpha < kPi))
        throw std::domain_error("theta_of_phi: alpha must lie in (pi/3, pi)");
    if (std::abs(alpha - kPi / 2) <= kSpecialAlphaTolerance) return kPi / 3;
    const double k = ConstantK::of(alpha).k;
    return theta_from_v(v_plus(k, std::abs(std::sin(phi))));
}

class NoCurveError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Principal-branch phi in [-pi/2, pi/2] from the arcsin form in X = cos(theta).
inline double phi_of_theta(double alpha, double theta) {
    if (std::abs(alpha - kPi / 2) <= kSpecialAlphaTolerance)
        throw std::domain_error("phi_of_theta: k = 0, the curve is the circle theta = pi/3");
    const double k = ConstantK::of(alpha).k;
    const double x = std::cos(theta);
    const double arg = (1.0 - 2.0 * x) / (kSqrt3 * k * std::sqrt(std::max(0.0, 1.0 - x * x)));
    constexpr double slack = 1e-12;
    if (!std::isfinite(arg) || std::abs(arg) > 1.0 + slack)
        throw NoCurveError("phi_of_theta: no constant-angle curve at this theta");
    return std::asin(std::clamp(arg, -1.0, 1.0));
}

namespace detail {

/// Cosine-clustered nodes strictly inside (lo, hi) when open, else including
/// both ends.
inline std::vector<double> clustered_nodes(double lo, double hi, int n, bool open) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = open ? (i + 1.0) / (n + 1.0) : (n == 1 ? 0.5 : double(i) / (n - 1));
        const double w = 0.5 * (1.0 - std::cos(kPi * u));
        out.push_back(lo + (hi - lo) * w);
    }
    if (!open && n > 1) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

inline CurveSample sample_at(double alpha, double phi) {
    const double th = theta_of_phi(alpha, phi);
    return {th, phi, std::cos(th)};
}

}  // namespace detail

/// Constant-alpha curve of one cluster's apex angle over one hemisphere.
inline ConstantAngleCurve sample_constant_angle_curve(double alpha, ClusterId cluster, int n,
                                                      Hemisphere hemisphere = Hemisphere::upper) {
    if (!(alpha > kPi / 3 && alpha < kPi))
        throw std::domain_error("constant-angle curve: alpha must lie in (pi/3, pi)");
    if (n < 2) throw std::invalid_argument("constant-angle curve: need at least 2 samples");
    if (hemisphere != Hemisphere::upper && hemisphere != Hemisphere::lower)
        throw std::invalid_argument("constant-angle curve: hemisphere must be upper or lower");
    const double sign = hemisphere == Hemisphere::upper ? 1.0 : -1.0;
    ConstantAngleCurve c{alpha, cluster, hemisphere, {},
                         {EndpointFlag::b_point_excluded, EndpointFlag::b_point_excluded}};
    for (double phi : detail::clustered_nodes(0.0, kPi, n, true))
        c.samples.push_back(detail::sample_at(alpha, sign * phi));
    return c;
}

struct ArcPoint {
    ShapeCoords native;  // coordinates in the arc's own cluster frame
    ShapeCoords frame1;  // cluster-1 frame
    ShapeVector xyz;     // embedded, cluster-1 frame
};

inline ArcPoint make_arc_point(const ShapeCoords& native) {
    const auto f1 = relabel(native, ClusterId(1));
    return {native, f1, embed(f1)};
}

struct ContourArc {
    ClusterId cluster;
    Hemisphere hemisphere;
    std::vector<ArcPoint> points;
    std::array<EndpointFlag, 2> endpoint_flags;
};

enum class ContourRegime { point_orbits, acute_cusped, separatrix, obtuse, collinear };

inline const char* to_string(ContourRegime r) {
    switch (r) {
        case ContourRegime::point_orbits: return "point_orbits";
        case ContourRegime::acute_cusped: return "acute_cusped";
        case ContourRegime::separatrix: return "separatrix";
        case ContourRegime::obtuse: return "obtuse";
        default: return "collinear";
    }
}

struct MaxAngleContour {
    double alpha;
    ContourRegime regime;
    std::vector<ContourArc> arcs;
    std::vector<ShapeCoords> cusps;                  // cluster-1 frame
    std::vector<ShapeCoords> excluded_limit_points;  // B points not on the contour
    std::vector<ShapeCoords> kissing_points;         // B points on the separatrix
    std::vector<ShapeCoords> point_orbits;           // E, Ebar at alpha = pi/3
};

namespace detail {

inline void push_unique(std::vector<ShapeCoords>& v, const ShapeCoords& s) {
    for (const auto& o : v)
        if (norm(embed(o) - embed(s)) < 1e-9) return;
    v.push_back(s);
}

inline std::vector<ShapeCoords> all_b_points() {
    return {special_point({SpecialTag::B, ClusterId(1)}), special_point({SpecialTag::B, ClusterId(2)}),
            special_point({SpecialTag::B, ClusterId(3)})};
}

/// Apex angle minus the larger of the other two angles along the upper
/// constant-alpha curve of cluster k.
inline double apex_margin(double alpha, ClusterId k, double phi) {
    const ShapeCoords s{theta_of_phi(alpha, phi), phi, k, true};
    const auto angles = angles_from_shape(s);
    const double apex = angles[k.apex()];
    const double other = std::max(angles[k.base_first()], angles[k.base_second()]);
    return apex - other;
}

}  // namespace detail

/// Azimuth (upper hemisphere, cluster frame) of the cusp nearer phi = 0 on the
/// constant-alpha curve, pi/3 < alpha < pi/2. The other cusp is at pi - phi.
inline double cusp_azimuth(double alpha, ClusterId k = ClusterId(1)) {
    double lo = 1e-9;  // apex not maximal near the B point
    double hi = kPi / 2;
    if (!(detail::apex_margin(alpha, k, lo) < 0.0 && detail::apex_margin(alpha, k, hi) > 0.0))
        throw std::logic_error("cusp_azimuth: margin does not bracket a root");
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (detail::apex_margin(alpha, k, mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Level set {alpha_max = alpha}, split into arcs tagged by the cluster whose
/// apex angle is maximal.
inline MaxAngleContour assemble_max_angle_contour(double alpha, int n = kDefaultArcSamples) {
    if (!(alpha >= kPi / 3 - kSpecialAlphaTolerance && alpha <= kPi + kSpecialAlphaTolerance))
        throw std::domain_error("contour: alpha must lie in [pi/3, pi]");
    if (n < 2) throw std::invalid_argument("contour: need at least 2 samples per arc");
    MaxAngleContour out{alpha, ContourRegime::obtuse, {}, {}, {}, {}, {}};

    if (alpha <= kPi / 3 + kSpecialAlphaTolerance) {
        out.regime = ContourRegime::point_orbits;
        out.point_orbits = {special_point({SpecialTag::E}), special_point({SpecialTag::Ebar})};
        return out;
    }

    if (std::abs(alpha - kPi / 2) <= kSpecialAlphaTolerance) {
        out.regime = ContourRegime::separatrix;
        // phi grid includes 0 and pi exactly so the kissing B points are samples.
        const int m = 2 * n;
        for (auto k : kClusters) {
            ContourArc arc{k, Hemisphere::full, {}, {EndpointFlag::closed, EndpointFlag::closed}};
            for (int i = 0; i <= m; ++i) {
                const double phi = -kPi + 2.0 * kPi * i / m;
                arc.points.push_back(make_arc_point({kPi / 3, phi, k, true}));
            }
            out.arcs.push_back(std::move(arc));
        }
        out.kissing_points = detail::all_b_points();
        return out;
    }

    if (alpha >= kPi - kSpecialAlphaTolerance) {
        out.regime = ContourRegime::collinear;
        // Segment of the equator through U(k), between the two B punctures.
        for (auto k : kClusters) {
            ContourArc arc{k, Hemisphere::equator, {}, {EndpointFlag::b_point_excluded,
                                                        EndpointFlag::b_point_excluded}};
            for (double t : detail::clustered_nodes(-kPi / 3, kPi / 3, 2 * n, true)) {
                const ShapeCoords s = t == 0.0 ? ShapeCoords{0.0, 0.0, k, false}
                                               : ShapeCoords{std::abs(t), t > 0 ? 0.0 : kPi, k, true};
                arc.points.push_back(make_arc_point(s));
            }
            out.arcs.push_back(std::move(arc));
        }
        out.excluded_limit_points = detail::all_b_points();
        return out;
    }

    if (alpha > kPi / 2) {
        out.regime = ContourRegime::obtuse;
        for (auto k : kClusters) {
            for (auto h : {Hemisphere::upper, Hemisphere::lower}) {
                const auto curve = sample_constant_angle_curve(alpha, k, n, h);
                ContourArc arc{k, h, {}, curve.endpoint_flags};
                for (const auto& s : curve.samples) arc.points.push_back(make_arc_point({s.theta, s.phi, k, true}));
                out.arcs.push_back(std::move(arc));
            }
        }
        out.excluded_limit_points = detail::all_b_points();
        return out;
    }

    out.regime = ContourRegime::acute_cusped;
    for (auto k : kClusters) {
        const double phi_c = cusp_azimuth(alpha, k);
        for (auto h : {Hemisphere::upper, Hemisphere::lower}) {
            const double sign = h == Hemisphere::upper ? 1.0 : -1.0;
            ContourArc arc{k, h, {}, {EndpointFlag::cusp, EndpointFlag::cusp}};
            for (double phi : detail::clustered_nodes(phi_c, kPi - phi_c, n, false)) {
                const double p = sign * phi;
                arc.points.push_back(make_arc_point({theta_of_phi(alpha, p), p, k, true}));
            }
            detail::push_unique(out.cusps, arc.points.front().frame1);
            detail::push_unique(out.cusps, arc.points.back().frame1);
            out.arcs.push_back(std::move(arc));
        }
    }
    return out;
}

inline MaxAngleContour separatrix(int n = kDefaultArcSamples) {
    return assemble_max_angle_contour(kPi / 2, n);
}

/// Intersection points of the three rightness cap-circles. Each circle is the
/// plane section {x . U(k) = 1/2}; two such sections meet where
/// x = lambda (a + b) + mu (a x b) with lambda = 1/2 / (1 + a.b).
inline std::vector<ShapeCoords> separatrix_self_intersections() {
    std::array<Vec3, 3> axis;
    for (auto k : kClusters) axis[k.value() - 1] = embed(special_point({SpecialTag::U, k}));
    std::vector<ShapeCoords> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec3 a = axis[i], b = axis[j];
            const double ab = dot(a, b);
            const double lambda = 0.5 / (1.0 + ab);
            const Vec3 base = (a + b) * lambda;
            const Vec3 n = cross(a, b);
            const double rem = 1.0 - dot(base, base);
            // rem ~ 0: tangency, a single kissing point.
            if (rem <= 1e-12) {
                detail::push_unique(out, from_vector(base, ClusterId(1)));
            } else {
                const double mu = std::sqrt(rem / dot(n, n));
                detail::push_unique(out, from_vector(base + n * mu, ClusterId(1)));
                detail::push_unique(out, from_vector(base - n * mu, ClusterId(1)));
            }
        }
    }
    return out;
}

// Isosceles bimeridian of cluster k: phi_k = +-pi/2 (median perpendicular to
// the base). The half from E/Ebar toward B(k) (theta_k > pi/2) carries the
// cusps of acute contours; the half from U(k) to E/Ebar (theta_k < pi/2)
// carries the stationary points. They are labelled flat (I^F) and tall (I^T)
// respectively.

inline double isosceles_meridian_offset(const ShapeCoords& s, ClusterId k) {
    const auto c = relabel(s, k);
    if (!c.phi_defined) return kPi / 2;
    return std::abs(std::abs(c.phi) - kPi / 2);
}

inline bool on_flat_isosceles_meridian(const ShapeCoords& s, ClusterId k, double tol = 1e-6) {
    const auto c = relabel(s, k);
    return isosceles_meridian_offset(s, k) <= tol && c.theta > kPi / 2;
}

inline bool on_tall_isosceles_meridian(const ShapeCoords& s, ClusterId k, double tol = 1e-6) {
    const auto c = relabel(s, k);
    return isosceles_meridian_offset(s, k) <= tol && c.theta < kPi / 2;
}

struct StationaryPoints {
    std::vector<ShapeCoords> points;  // cluster-1 frame
    bool degenerate = false;          // every point stationary (circle or equator)
};

/// Points where d theta / d phi = 0 along each arc, in the arc's own frame.
inline StationaryPoints stationary_points(const MaxAngleContour& contour) {
    if (contour.arcs.empty()) throw std::invalid_argument("stationary_points: contour has no arcs");
    StationaryPoints out;
    if (contour.regime == ContourRegime::separatrix || contour.regime == ContourRegime::collinear) {
        out.degenerate = true;
        return out;
    }
    const double alpha = contour.alpha;
    constexpr double h = 1e-6;
    auto slope = [&](double phi) { return theta_of_phi(alpha, phi + h) - theta_of_phi(alpha, phi - h); };
    for (const auto& arc : contour.arcs) {
        const auto& pts = arc.points;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double lo = pts[i].native.phi, hi = pts[i + 1].native.phi;
            double slo = slope(lo), shi = slope(hi);
            if (slo == 0.0) {
                detail::push_unique(out.points, pts[i].frame1);
                continue;
            }
            if ((slo > 0) == (shi > 0)) continue;
            for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double sm = slope(mid);
                if ((sm > 0) == (slo > 0)) {
                    lo = mid;
                    slo = sm;
                } else {
                    hi = mid;
                }
            }
            const double phi = 0.5 * (lo + hi);
            detail::push_unique(out.points,
                                relabel({theta_of_phi(alpha, phi), phi, arc.cluster, true}, ClusterId(1)));
        }
    }
    return out;
}

// Symmetry group of the shape sphere (S3 x Z2) acting on cluster-1 embedded
// vectors: R rotates by 2pi/3 about the E axis (cyclic relabelling), sigma
// reflects phi -> -phi (orientation), tau swaps the base pair of cluster 1
// (phi -> phi - pi).

inline Vec3 reflect_orientation(Vec3 v) { return {v.x, -v.y, v.z}; }
inline Vec3 swap_base_pair(Vec3 v) { return {-v.x, -v.y, v.z}; }

struct SymmetryElement {
    std::string name;
    int rotations;  // powers of R
    bool swap;      // apply tau first
    bool reflect;   // then sigma

    Vec3 apply(Vec3 v) const {
        if (swap) v = swap_base_pair(v);
        if (reflect) v = reflect_orientation(v);
        return rotate_about_e_axis(v, 2.0 * kPi / 3.0 * rotations);
    }
};

inline std::vector<SymmetryElement> symmetry_group() {
    std::vector<SymmetryElement> g;
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 2; ++s)
            for (int f = 0; f < 2; ++f)
                g.push_back({"R^" + std::to_string(r) + (s ? " tau" : "") + (f ? " sigma" : ""), r,
                             s == 1, f == 1});
    return g;
}

namespace detail {

inline double point_segment_distance(Vec3 p, Vec3 a, Vec3 b) {
    const Vec3 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

inline double distance_to_arcs(Vec3 p, const std::vector<std::vector<Vec3>>& arcs) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : arcs) {
        if (a.size() == 1) best = std::min(best, norm(p - a[0]));
        for (std::size_t i = 0; i + 1 < a.size(); ++i)
            best = std::min(best, point_segment_distance(p, a[i], a[i + 1]));
    }
    return best;
}

inline std::vector<std::vector<Vec3>> contour_polylines(const MaxAngleContour& c) {
    std::vector<std::vector<Vec3>> out;
    for (const auto& arc : c.arcs) {
        std::vector<Vec3> line;
        for (const auto& p : arc.points) line.push_back(p.xyz);
        out.push_back(std::move(line));
    }
    for (const auto& p : c.point_orbits) out.push_back({embed(p)});
    return out;
}

}  // namespace detail

/// Symmetric Hausdorff distance between a contour and its image, measured
/// from sample points to the other set's polylines.
inline double hausdorff_under(const MaxAngleContour& c, const SymmetryElement& g) {
    const auto lines = detail::contour_polylines(c);
    std::vector<std::vector<Vec3>> image;
    for (const auto& l : lines) {
        std::vector<Vec3> m;
        for (const auto& p : l) m.push_back(g.apply(p));
        image.push_back(std::move(m));
    }
    double d = 0.0;
    for (const auto& l : image)
        for (const auto& p : l) d = std::max(d, detail::distance_to_arcs(p, lines));
    for (const auto& l : lines)
        for (const auto& p : l) d = std::max(d, detail::distance_to_arcs(p, image));
    return d;
}

struct SymmetryReport {
    struct Row {
        std::string element;
        double hausdorff;
        bool pass;
    };
    std::vector<Row> rows;
    bool all_pass = true;
};

/// Checks invariance under reflection and the two relabel rotations, or
/// under the whole 12-element group when full_group is set.
inline SymmetryReport symmetry_check(const MaxAngleContour& c, bool full_group = false,
                                     double tol = 1e-6) {
    std::vector<SymmetryElement> elems;
    if (full_group) {
        elems = symmetry_group();
    } else {
        elems = {{"sigma", 0, false, true}, {"R", 1, false, false}, {"R^2", 2, false, false}};
    }
    SymmetryReport r;
    for (const auto& g : elems) {
        const double d = hausdorff_under(c, g);
        r.rows.push_back({g.name, d, d < tol});
        r.all_pass = r.all_pass && d < tol;
    }
    return r;
}

enum class CriticalKind { centre, kissing_node };

struct CriticalPointReport {
    ShapeCoords location;
    std::string name;
    CriticalKind kind;
    double alpha_at_location;                          // pi/3 for E/Ebar; NaN at B
    std::vector<std::pair<double, double>> ring;       // (bearing, alpha_max)
    double ring_min;
    double ring_max;
    int separatrix_crossings;                          // sign changes of alpha_max - pi/2
    bool strict_minimum;                               // ring strictly above the centre value
};

/// Samples alpha_max on a geodesic ring around E, Ebar or a B point.
inline CriticalPointReport probe_critical_point(const ShapeCoords& location, double epsilon = 1e-3,
                                                int m = 360) {
    const Vec3 p = embed(relabel(location, ClusterId(1)));
    std::optional<SpecialShape> match;
    for (const auto& sp : special_catalog()) {
        if (sp.tag != SpecialTag::E && sp.tag != SpecialTag::Ebar && sp.tag != SpecialTag::B) continue;
        if (norm(embed(special_point(sp)) - p) < 1e-9) match = sp;
    }
    if (!match) throw std::invalid_argument("probe_critical_point: location must be E, Ebar or a B point");
    if (!(epsilon > 0 && epsilon < 0.5) || m < 4)
        throw std::invalid_argument("probe_critical_point: need 0 < epsilon < 0.5 and m >= 4");

    // Tangent frame from the projections of the x (or y) axis; the x choice is
    // invariant under phi -> -phi, so the E and Ebar rings mirror exactly.
    Vec3 ref{1, 0, 0};
    if (std::abs(p.x) > 0.9) ref = {0, 1, 0};
    const Vec3 e1 = normalized(ref - p * dot(ref, p));
    const Vec3 e2 = cross(p, e1);

    const bool is_e = match->tag != SpecialTag::B;
    CriticalPointReport r{from_vector(p, ClusterId(1)),
                          match->name(),
                          is_e ? CriticalKind::centre : CriticalKind::kissing_node,
                          is_e ? kPi / 3 : std::numeric_limits<double>::quiet_NaN(),
                          {},
                          std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity(),
                          0,
                          false};
    for (int j = 0; j < m; ++j) {
        const double bearing = 2.0 * kPi * j / m;
        const Vec3 q = p * std::cos(epsilon) +
                       (e1 * std::cos(bearing) + e2 * std::sin(bearing)) * std::sin(epsilon);
        const double a = max_angle_from_shape(from_vector(q, ClusterId(1))).alpha_max;
        r.ring.emplace_back(bearing, a);
        r.ring_min = std::min(r.ring_min, a);
        r.ring_max = std::max(r.ring_max, a);
    }
    for (int j = 0; j < m; ++j) {
        const bool s0 = r.ring[j].second > kPi / 2;
        const bool s1 = r.ring[(j + 1) % m].second > kPi / 2;
        if (s0 != s1) ++r.separatrix_crossings;
    }
    r.strict_minimum = is_e && r.ring_min > r.alpha_at_location;
    return r;
}

}  // namespace shapesphere
