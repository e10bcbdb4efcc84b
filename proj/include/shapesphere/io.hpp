#pragma once

// Serialization: JSON records, CSV polylines and SVG figures.
// Field names and column order are part of the public format (docs/formats.md).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flow.hpp"
#include "measure.hpp"
#include "montecarlo.hpp"
#include "shape_map.hpp"

namespace shapesphere::io {

using Json = nlohmann::ordered_json;

inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Shortest decimal that round-trips to the same double.
inline std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return {buf, end};
}

inline Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

inline Json to_json(const ShapeCoords& s) {
    Json j;
    j["cluster"] = s.cluster.value();
    j["theta"] = s.theta;
    j["theta_deg"] = s.theta * kRadToDeg;
    if (s.phi_defined) {
        j["phi"] = s.phi;
        j["phi_deg"] = s.phi * kRadToDeg;
    } else {
        j["phi"] = nullptr;
        j["phi_deg"] = nullptr;
    }
    j["vector"] = to_json(embed(s));
    return j;
}

inline Json to_json(const AreaResult& a) {
    return Json{{"value", a.value}, {"method", to_string(a.method)}, {"error_estimate", a.error_estimate}};
}

inline Json to_json(const McEstimate& e) {
    return Json{{"predicate", e.predicate}, {"p_hat", e.p_hat}, {"stderr", e.stderr_},
                {"n", e.n},                 {"hits", e.hits},   {"seed", e.seed}};
}

inline Json contour_to_json(const MaxAngleContour& c) {
    Json j;
    j["alpha"] = c.alpha;
    j["alpha_deg"] = c.alpha * kRadToDeg;
    j["regime"] = to_string(c.regime);
    Json arcs = Json::array();
    int id = 0;
    for (const auto& arc : c.arcs) {
        Json a;
        a["arc_id"] = id++;
        a["cluster"] = arc.cluster.value();
        a["hemisphere"] = to_string(arc.hemisphere);
        a["endpoint_flags"] = Json::array({to_string(arc.endpoint_flags[0]), to_string(arc.endpoint_flags[1])});
        Json pts = Json::array();
        for (const auto& p : arc.points)
            pts.push_back(Json::array({p.frame1.theta, p.frame1.phi, p.xyz.x, p.xyz.y, p.xyz.z}));
        a["columns"] = Json::array({"theta", "phi", "x", "y", "z"});
        a["points"] = std::move(pts);
        arcs.push_back(std::move(a));
    }
    j["arcs"] = std::move(arcs);
    auto list = [](const std::vector<ShapeCoords>& v) {
        Json out = Json::array();
        for (const auto& s : v) out.push_back(to_json(s));
        return out;
    };
    j["cusps"] = list(c.cusps);
    j["excluded_limit_points"] = list(c.excluded_limit_points);
    j["kissing_points"] = list(c.kissing_points);
    j["point_orbits"] = list(c.point_orbits);
    return j;
}

inline constexpr const char* kCsvHeader = "arc_id,cluster,hemisphere,theta,phi,x,y,z";

/// One row per sample, cluster-1 frame. Point orbits (alpha = pi/3) are
/// written as single-row arcs with cluster 0.
inline std::string contour_to_csv(const MaxAngleContour& c) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    int id = 0;
    auto row = [&os](int arc, int cluster, const char* hemi, const ShapeCoords& s, const Vec3& v) {
        os << arc << ',' << cluster << ',' << hemi << ',' << shortest(s.theta) << ','
           << (s.phi_defined ? shortest(s.phi) : std::string("")) << ',' << shortest(v.x) << ','
           << shortest(v.y) << ',' << shortest(v.z) << '\n';
    };
    for (const auto& arc : c.arcs) {
        for (const auto& p : arc.points) row(id, arc.cluster.value(), to_string(arc.hemisphere), p.frame1, p.xyz);
        ++id;
    }
    for (const auto& p : c.point_orbits) {
        row(id++, 0, p.phi > 0 ? "upper" : "lower", p, embed(p));
    }
    return os.str();
}

// ---------------------------------------------------------------- SVG

struct FlowSvgOptions {
    std::vector<double> alphas;
    Vec3 view{0.0, 1.0, 0.0};  // toward the viewer, cluster-1 embedded frame
    int width = 800;
    int height = 800;
    int resolution = 256;
};

inline std::vector<double> default_flow_alphas() {
    const double d = std::numbers::pi / 180.0;
    return {75 * d, 90 * d, 105 * d, 120 * d, 150 * d};
}

namespace detail {

struct Projector {
    Vec3 view, right, up;

    explicit Projector(Vec3 v) {
        view = normalized(v);
        Vec3 ref{0, 0, 1};
        if (std::abs(dot(ref, view)) > 0.99) ref = {1, 0, 0};
        right = normalized(cross(ref, view));
        up = cross(view, right);
    }
    bool visible(Vec3 p) const { return dot(p, view) >= 0.0; }
    std::pair<double, double> screen(Vec3 p) const { return {dot(p, right), -dot(p, up)}; }
};

inline std::string num(double v) {
    if (std::abs(v) < 5e-7) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

/// Visible runs of a polyline as SVG path data; hidden parts are dropped.
inline std::string path_data(const std::vector<Vec3>& line, const Projector& pr) {
    std::string d;
    bool pen = false;
    for (const auto& p : line) {
        if (!pr.visible(p)) {
            pen = false;
            continue;
        }
        const auto [x, y] = pr.screen(p);
        d += (pen ? " L" : (d.empty() ? "M" : " M")) + num(x) + "," + num(y);
        pen = true;
    }
    return d;
}

inline std::vector<Vec3> great_circle(Vec3 a, Vec3 b, int n) {
    // Circle through orthonormal a, b.
    std::vector<Vec3> out;
    for (int i = 0; i <= n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        out.push_back(a * std::cos(t) + b * std::sin(t));
    }
    return out;
}

}  // namespace detail

/// Orthographic view of the maximal-angle flow: sphere outline, collinearity
/// equator, dashed isosceles meridians (cusp and stationary-point
/// alignments), the separatrix, the requested contours and special points.
inline std::string render_flow_svg(const FlowSvgOptions& opt) {
    const detail::Projector pr(opt.view);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
       << "\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n";
    os << "<rect x=\"-1.05\" y=\"-1.05\" width=\"2.1\" height=\"2.1\" fill=\"white\"/>\n";
    os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.006\"/>\n";

    auto stroke = [&](const std::vector<Vec3>& line, const std::string& style, const std::string& cls) {
        const auto d = detail::path_data(line, pr);
        if (!d.empty()) os << "<path class=\"" << cls << "\" d=\"" << d << "\" fill=\"none\" " << style << "/>\n";
    };

    const int circle_n = 4 * std::max(opt.resolution, 16);
    stroke(detail::great_circle({1, 0, 0}, {0, 0, 1}, circle_n),
           "stroke=\"#555555\" stroke-width=\"0.005\"", "collinear");

    const Vec3 e = embed(special_point({SpecialTag::E}));
    for (auto k : kClusters) {
        const Vec3 u = embed(special_point({SpecialTag::U, k}));
        stroke(detail::great_circle(u, e, circle_n),
               "stroke=\"#777777\" stroke-width=\"0.004\" stroke-dasharray=\"0.02,0.015\"", "isosceles");
    }

    const auto sep = separatrix(std::max(opt.resolution, 16));
    for (const auto& arc : sep.arcs) {
        std::vector<Vec3> line;
        for (const auto& p : arc.points) line.push_back(p.xyz);
        stroke(line, "stroke=\"#7b2cbf\" stroke-width=\"0.012\"", "separatrix");
    }

    for (double a : opt.alphas) {
        if (std::abs(a - std::numbers::pi / 2) <= kSpecialAlphaTolerance) continue;  // drawn as separatrix
        const auto c = assemble_max_angle_contour(a, opt.resolution);
        const std::string colour = a < std::numbers::pi / 2 ? "#e09f00" : "#c1121f";
        for (const auto& arc : c.arcs) {
            std::vector<Vec3> line;
            for (const auto& p : arc.points) line.push_back(p.xyz);
            stroke(line, "stroke=\"" + colour + "\" stroke-width=\"0.007\"", "contour");
        }
        for (const auto& p : c.point_orbits) {
            const Vec3 v = embed(p);
            if (!pr.visible(v)) continue;
            const auto [x, y] = pr.screen(v);
            os << "<circle class=\"contour\" cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y)
               << "\" r=\"0.012\" fill=\"" << colour << "\"/>\n";
        }
    }

    for (const auto& sp : special_catalog()) {
        const Vec3 v = embed(special_point(sp));
        if (!pr.visible(v)) continue;
        const auto [x, y] = pr.screen(v);
        os << "<circle class=\"special\" cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y)
           << "\" r=\"0.015\" fill=\"black\"/>\n";
        os << "<text x=\"" << detail::num(x + 0.025) << "\" y=\"" << detail::num(y - 0.025)
           << "\" font-size=\"0.05\" font-family=\"sans-serif\">" << sp.name() << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace shapesphere::io
