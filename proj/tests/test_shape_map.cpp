#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <shapesphere/angle_law.hpp>
#include <shapesphere/shape_map.hpp>

#include "oracles.hpp"

using namespace shapesphere;

namespace {

const double kS3 = std::sqrt(3.0);
const PlanarTriangle kRightIsosceles{{0, 1}, {-1, 0}, {1, 0}};
const PlanarTriangle kEquilateral{{0, kS3}, {-1, 0}, {1, 0}};
const ClusterId c1(1), c2(2), c3(3);

ShapeCoords random_shape(std::mt19937_64& rng, ClusterId k) {
    std::uniform_real_distribution<double> u(-1, 1), p(-kPi, kPi);
    double z = u(rng);
    while (std::abs(z) > 1 - 1e-9) z = u(rng);
    return {std::acos(z), p(rng), k, true};
}

double vdist(const ShapeCoords& a, const ShapeCoords& b) { return norm(embed(a) - embed(b)); }

}  // namespace

TEST(ClusterId, CycleAndLabels) {
    EXPECT_EQ(c1.next(), c2);
    EXPECT_EQ(c3.next(), c1);
    EXPECT_EQ(c1.prev(), c3);
    EXPECT_EQ(c1.apex(), Vertex::A);
    EXPECT_EQ(c1.base_first(), Vertex::B);
    EXPECT_EQ(c1.base_second(), Vertex::C);
    EXPECT_EQ(c2.base_first(), Vertex::C);
    EXPECT_EQ(c2.base_second(), Vertex::A);
    EXPECT_THROW(ClusterId(0), std::out_of_range);
    EXPECT_THROW(ClusterId(4), std::out_of_range);
}

TEST(Jacobi, Examples) {
    auto j = jacobi(kRightIsosceles, c1);
    EXPECT_EQ(j.r1, (Vec2{2, 0}));
    EXPECT_EQ(j.r2, (Vec2{0, 1}));
    j = jacobi(kEquilateral, c1);
    EXPECT_EQ(j.r1, (Vec2{2, 0}));
    EXPECT_EQ(j.r2, (Vec2{0, kS3}));
    const Vec2 off{5, 7};
    const PlanarTriangle moved{kRightIsosceles.a + off, kRightIsosceles.b + off, kRightIsosceles.c + off};
    const auto m = jacobi(moved, c1);
    EXPECT_EQ(m.r1, (Vec2{2, 0}));
    EXPECT_EQ(m.r2, (Vec2{0, 1}));
}

TEST(MassWeight, Examples) {
    const auto m = mass_weight({{2, 0}, {0, 1}, c1});
    EXPECT_NEAR(m.rho1.x, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m.rho2.y, std::sqrt(2.0 / 3.0), 1e-15);
    EXPECT_NEAR(norm(m.rho2) / norm(m.rho1), 1 / kS3, 1e-15);
    const auto z = mass_weight({{2, 0}, {0, 0}, c1});
    EXPECT_EQ(norm(z.rho2), 0.0);
    // |rho2|/|rho1| = (2/sqrt3) |R2|/|R1|
    const auto w = mass_weight({{3, 1}, {-2, 5}, c2});
    EXPECT_NEAR(norm(w.rho2) / norm(w.rho1), 2 / kS3 * std::hypot(-2, 5) / std::hypot(3, 1), 1e-14);
}

TEST(ShapeCoords, Examples) {
    auto s = shape_coords(kRightIsosceles, c1);
    EXPECT_NEAR(s.theta, kPi / 3, 1e-15);
    EXPECT_NEAR(s.phi, kPi / 2, 1e-15);
    s = shape_coords(kEquilateral, c1);
    EXPECT_NEAR(s.theta, kPi / 2, 1e-15);
    EXPECT_NEAR(s.phi, kPi / 2, 1e-15);
}

TEST(ShapeCoords, CollisionsByDirectSubstitution) {
    // A = C: R1 = C - B, R2 = C - (B + C)/2 = R1/2, parallel.
    auto s = shape_coords({{1, 0}, {-1, 0}, {1, 0}}, c1);
    EXPECT_NEAR(s.theta, kPi / 3, 1e-15);
    EXPECT_EQ(s.phi, 0.0);
    // A = B: R2 = -R1/2.
    s = shape_coords({{-1, 0}, {-1, 0}, {1, 0}}, c1);
    EXPECT_NEAR(s.theta, kPi / 3, 1e-15);
    EXPECT_EQ(s.phi, kPi);
    // B = C: pole B, phi undefined.
    s = shape_coords({{0, 1}, {0, 0}, {0, 0}}, c1);
    EXPECT_EQ(s.theta, kPi);
    EXPECT_FALSE(s.phi_defined);
    // Apex at the base midpoint: pole U.
    s = shape_coords({{0, 0}, {-1, 0}, {1, 0}}, c1);
    EXPECT_EQ(s.theta, 0.0);
    EXPECT_FALSE(s.phi_defined);
    EXPECT_THROW(shape_coords({{1, 1}, {1, 1}, {1, 1}}, c1), ShapeError);
}

TEST(ShapeCoords, ReflectionNegatesPhi) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const auto t = oracle::random_triangle(rng);
        const PlanarTriangle r{{t.a.x, -t.a.y}, {t.b.x, -t.b.y}, {t.c.x, -t.c.y}};
        for (auto k : kClusters) {
            const auto s = shape_coords(t, k), m = shape_coords(r, k);
            EXPECT_NEAR(s.theta, m.theta, 1e-12);
            if (std::abs(std::abs(s.phi) - kPi) > 1e-9) EXPECT_NEAR(s.phi, -m.phi, 1e-12);
        }
    }
}

TEST(ShapeCoords, PositiveOrientationInUpperHemisphere) {
    // Counterclockwise A, B, C lands in phi > 0 for every cluster.
    std::mt19937_64 rng(6);
    for (int i = 0; i < 1000; ++i) {
        const auto t = oracle::random_triangle(rng);
        const double orient = cross(t.b - t.a, t.c - t.a);
        if (std::abs(orient) < 1e-6) continue;
        for (auto k : kClusters) EXPECT_EQ(shape_coords(t, k).phi > 0, orient > 0);
    }
}

TEST(ShapeCoords, SimilarityInvariance) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 2000; ++i) {
        const auto t = oracle::random_triangle(rng);
        if (degeneracy(t).kind != DegeneracyKind::nondegenerate) continue;
        const double rot = u(rng), scale = std::exp(u(rng));
        const Vec2 off{u(rng), u(rng)};
        auto map = [&](Vec2 p) {
            return Vec2{scale * (std::cos(rot) * p.x - std::sin(rot) * p.y) + off.x,
                        scale * (std::sin(rot) * p.x + std::cos(rot) * p.y) + off.y};
        };
        const PlanarTriangle m{map(t.a), map(t.b), map(t.c)};
        for (auto k : kClusters) EXPECT_LT(vdist(shape_coords(t, k), shape_coords(m, k)), 1e-9);
    }
}

TEST(Reconstruct, Examples) {
    const auto t = reconstruct({kPi / 3, kPi / 2, c1, true});
    const auto a = vertex_angles(t);
    EXPECT_NEAR(a.a, kPi / 2, 1e-14);
    EXPECT_NEAR(a.b, kPi / 4, 1e-14);
    const auto e = reconstruct({kPi / 2, kPi / 2, c1, true});
    const auto ae = vertex_angles(e);
    EXPECT_NEAR(ae.a, kPi / 3, 1e-14);
    EXPECT_NEAR(ae.b, kPi / 3, 1e-14);
    EXPECT_GT(cross(e.b - e.a, e.c - e.a), 0);
    const auto eb = reconstruct({kPi / 2, -kPi / 2, c1, true});
    EXPECT_LT(cross(eb.b - eb.a, eb.c - eb.a), 0);
    // Unit mass-weighted base.
    EXPECT_NEAR(norm(mass_weight(jacobi(t, c1)).rho1), 1.0, 1e-15);
}

TEST(Reconstruct, RoundTripProperty) {
    std::mt19937_64 rng(8);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
        const auto k = kClusters[i % 3];
        const auto s = random_shape(rng, k);
        worst = std::max(worst, vdist(shape_coords(reconstruct(s), k), s));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Relabel, Examples) {
    const ShapeCoords e{kPi / 2, kPi / 2, c1, true};
    const auto e2 = relabel(e, c2);
    EXPECT_NEAR(e2.theta, kPi / 2, 1e-14);
    EXPECT_NEAR(e2.phi, kPi / 2, 1e-14);
    EXPECT_EQ(e2.cluster, c2);

    // B(1) seen from cluster 2: B = C, so R2(c2) = B - (C + A)/2 = -R1(c2)/2.
    const auto b = relabel({kPi, 0.0, c1, false}, c2);
    EXPECT_NEAR(b.theta, kPi / 3, 1e-14);
    EXPECT_NEAR(std::abs(b.phi), kPi, 1e-14);

    const ShapeCoords s{1.0, 0.3, c2, true};
    const auto same = relabel(s, c2);
    EXPECT_EQ(same.theta, s.theta);
    EXPECT_EQ(same.phi, s.phi);
}

TEST(Relabel, IsRotationAboutEAxis) {
    // Cluster k -> k+1 is the same fixed rotation for every shape.
    std::mt19937_64 rng(9);
    const ShapeCoords probe{kPi / 3, 0.0, c1, true};  // B(2) in cluster 1
    const Vec3 target = embed(relabel(probe, c2));
    double sign = 0;
    for (double s : {1.0, -1.0})
        if (norm(rotate_about_e_axis(embed(probe), s * 2 * kPi / 3) - target) < 1e-12) sign = s;
    ASSERT_NE(sign, 0.0);
    for (int i = 0; i < 10000; ++i) {
        const auto s = random_shape(rng, c1);
        const Vec3 rotated = rotate_about_e_axis(embed(s), sign * 2 * kPi / 3);
        EXPECT_LT(norm(embed(relabel(s, c2)) - rotated), 1e-9);
        const Vec3 rotated2 = rotate_about_e_axis(embed(s), -sign * 2 * kPi / 3);
        EXPECT_LT(norm(embed(relabel(s, c3)) - rotated2), 1e-9);
    }
}

TEST(Embed, Examples) {
    auto v = embed({kPi / 2, kPi / 2, c1, true});
    EXPECT_NEAR(v.x, 0, 1e-16);
    EXPECT_NEAR(v.y, 1, 1e-16);
    EXPECT_NEAR(v.z, 0, 1e-16);
    v = embed({0, 0, c1, false});
    EXPECT_EQ(v.z, 1.0);
    v = embed({kPi / 3, 0, c1, true});
    EXPECT_NEAR(v.x, kS3 / 2, 1e-15);
    EXPECT_NEAR(v.z, 0.5, 1e-15);
}

TEST(SpecialPoints, Catalog) {
    auto e = special_point({SpecialTag::E});
    EXPECT_EQ(e.theta, kPi / 2);
    EXPECT_EQ(e.phi, kPi / 2);
    auto b2 = special_point({SpecialTag::B, c2});
    EXPECT_NEAR(b2.theta, kPi / 3, 1e-15);
    EXPECT_EQ(b2.phi, 0.0);
    auto h1 = special_point({SpecialTag::H, c1});
    EXPECT_EQ(h1.theta, kPi / 2);
    EXPECT_EQ(h1.phi, 0.0);
    // B(k) really is the k-th base-pair collision.
    for (auto k : kClusters) {
        const auto t = reconstruct(relabel(special_point({SpecialTag::B, k}), k));
        const auto d = degeneracy(t);
        EXPECT_EQ(d.kind, DegeneracyKind::binary_collision);
        EXPECT_EQ(d.pair[0] == k.apex() || d.pair[1] == k.apex(), false);
        // U(k) and B(k) antipodal; H(k) perpendicular to both.
        const Vec3 u = embed(special_point({SpecialTag::U, k}));
        const Vec3 b = embed(special_point({SpecialTag::B, k}));
        const Vec3 h = embed(special_point({SpecialTag::H, k}));
        EXPECT_NEAR(dot(u, b), -1, 1e-12);
        EXPECT_NEAR(dot(h, u), 0, 1e-12);
        EXPECT_NEAR(h.y, 0, 1e-12);  // collinear
    }
    // U(2): B at the midpoint of C and A.
    const auto u2 = special_point({SpecialTag::U, c2});
    EXPECT_NEAR(u2.theta, 2 * kPi / 3, 1e-12);
    EXPECT_NEAR(std::abs(u2.phi), kPi, 1e-12);
}

TEST(ShapeSphere, CollinearityCircle) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 2000; ++i) {
        // Collinear: three points on a random line.
        const double ang = u(rng);
        const Vec2 d{std::cos(ang), std::sin(ang)};
        const PlanarTriangle t{d * u(rng), d * u(rng), d * u(rng)};
        if (degeneracy(t).kind != DegeneracyKind::collinear) continue;
        const auto s = shape_coords(t, c1);
        const bool on_circle = !s.phi_defined || std::abs(std::sin(s.phi)) < 1e-9;
        EXPECT_TRUE(on_circle);
    }
    for (int i = 0; i < 2000; ++i) {
        const auto t = oracle::random_triangle(rng);
        if (degeneracy(t).kind != DegeneracyKind::nondegenerate) continue;
        const auto s = shape_coords(t, c1);
        if (std::abs(cross(t.b - t.a, t.c - t.a)) > 1e-6) EXPECT_GT(std::abs(std::sin(s.phi)), 1e-9);
    }
}

TEST(ShapeSphere, RightnessCapBothDirections) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    // Right at A => theta1 = pi/3 (A on the circle with diameter BC).
    for (int i = 0; i < 2000; ++i) {
        const double t = u(rng);
        if (std::abs(std::sin(t)) < 1e-3) continue;
        const PlanarTriangle tri{{std::cos(t), std::sin(t)}, {-1, 0}, {1, 0}};
        EXPECT_NEAR(shape_coords(tri, c1).theta, kPi / 3, 1e-9);
    }
    // theta1 = pi/3 => right at A.
    for (int i = 0; i < 2000; ++i) {
        const double phi = u(rng) - kPi;
        if (std::abs(std::sin(phi)) < 1e-3) continue;
        const auto a = vertex_angles(reconstruct({kPi / 3, phi, c1, true}));
        EXPECT_NEAR(a.a, kPi / 2, 1e-9);
    }
}
