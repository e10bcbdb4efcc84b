#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <shapesphere/montecarlo.hpp>

using namespace shapesphere;

TEST(CounterRng, FrozenVectors) {
    // Reference SplitMix64 sequence, computed independently.
    const CounterRng r0(0);
    EXPECT_EQ(r0.at(0), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(r0.at(1), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(r0.at(2), 0x06c45d188009454fULL);
    EXPECT_EQ(r0.at(3), 0xf88bb8a8724c81ecULL);
    const CounterRng r42(42);
    EXPECT_EQ(r42.at(0), 0xbdd732262feb6e95ULL);
    EXPECT_EQ(r42.at(1), 0x28efe333b266f103ULL);
    EXPECT_EQ(r42.at(2), 0x47526757130f9f52ULL);
    EXPECT_EQ(r42.at(3), 0x581ce1ff0e4ae394ULL);
    const CounterRng rmax(~0ULL);
    EXPECT_EQ(rmax.at(0), 0xe4d971771b652c20ULL);
    EXPECT_EQ(rmax.at(1), 0xe99ff867dbf682c9ULL);
    EXPECT_EQ(rmax.at(2), 0x382ff84cb27281e9ULL);
    EXPECT_EQ(rmax.at(3), 0x6d1db36ccba982d2ULL);
    EXPECT_EQ(r42.uniform(0), 0.7415648787718233);
    EXPECT_EQ(r42.uniform(1), 0.1599103928769201);
}

TEST(Sampling, UniformMoments) {
    const CounterRng rng(7);
    const int n = 200000;
    double sz = 0, sz2 = 0, sx = 0, sy = 0;
    for (int j = 0; j < n; ++j) {
        const auto s = sample_uniform_shape(rng, j);
        ASSERT_GE(s.theta, 0.0);
        ASSERT_LE(s.theta, kPi);
        ASSERT_GT(s.phi, -kPi);
        ASSERT_LE(s.phi, kPi);
        const Vec3 v = embed(s);
        sz += v.z;
        sz2 += v.z * v.z;
        sx += v.x;
        sy += v.y;
    }
    // Uniform on the sphere: each coordinate has mean 0 and variance 1/3.
    const double se = std::sqrt(1.0 / 3 / n);
    EXPECT_LT(std::abs(sz / n), 5 * se);
    EXPECT_LT(std::abs(sx / n), 5 * se);
    EXPECT_LT(std::abs(sy / n), 5 * se);
    EXPECT_NEAR(sz2 / n, 1.0 / 3, 5 * std::sqrt(4.0 / 45 / n));
}

TEST(Estimate, DeterministicAcrossThreadsAndChunks) {
    const auto pred = predicates::obtuse();
    McConfig a{100000, 11, 65536, 1};
    McConfig b{100000, 11, 65536, 4};
    McConfig c{100000, 11, 777, 3};
    const auto ea = estimate(pred, a), eb = estimate(pred, b), ec = estimate(pred, c);
    EXPECT_EQ(ea.hits, eb.hits);
    EXPECT_EQ(ea.hits, ec.hits);
    EXPECT_EQ(ea.p_hat, eb.p_hat);
    EXPECT_NE(ea.hits, estimate(pred, {100000, 12, 65536, 1}).hits);
}

TEST(Estimate, Errors) {
    EXPECT_THROW(estimate(predicates::obtuse(), {0, 1, 10, 1}), std::invalid_argument);
    EXPECT_THROW(estimate(predicates::obtuse(), {10, 1, 0, 1}), std::invalid_argument);
}

TEST(Estimate, CalibratedOnKnownCap) {
    // Cap theta < pi/3 has probability exactly 1/4.
    int within_2se = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto e = estimate(predicates::cap(kPi / 3), {20000, seed, 65536, 1});
        if (std::abs(e.p_hat - 0.25) <= 2 * e.stderr_) ++within_2se;
    }
    // Binomial(100, 0.954): 88 is more than 4 sd below the mean.
    EXPECT_GE(within_2se, 88);
}

TEST(Estimate, ObtuseMatchesCaps) {
    const auto e = estimate(predicates::obtuse(), {400000, 42, 65536, 0});
    EXPECT_NEAR(e.p_hat, 0.75, 4 * e.stderr_);
}

TEST(Predicates, PerClusterObtuseRegionsDisjoint) {
    const CounterRng rng(5);
    const auto c1 = predicates::cluster_obtuse(ClusterId(1));
    const auto c2 = predicates::cluster_obtuse(ClusterId(2));
    const auto c3 = predicates::cluster_obtuse(ClusterId(3));
    const auto ob = predicates::obtuse();
    for (int j = 0; j < 100000; ++j) {
        const auto s = sample_uniform_shape(rng, j);
        const int n = c1.test(s) + c2.test(s) + c3.test(s);
        ASSERT_LE(n, 1);
        ASSERT_EQ(n == 1, ob.test(s));
    }
}

TEST(Predicates, Examples) {
    const auto e = special_point({SpecialTag::E});
    EXPECT_FALSE(predicates::obtuse().test(e));
    EXPECT_TRUE(predicates::alpha_at_least(kPi / 3).test(e));
    EXPECT_FALSE(predicates::fermat_obtuse().test(e));
    // Collisions are excluded (measure zero).
    EXPECT_FALSE(predicates::obtuse().test(special_point({SpecialTag::B, ClusterId(1)})));
    // U(1) is the collinear shape with the apex at the base midpoint: angle pi.
    EXPECT_TRUE(predicates::fermat_obtuse().test(special_point({SpecialTag::U, ClusterId(1)})));
    EXPECT_TRUE(predicates::cap(1.0).test({0.5, 0.0, ClusterId(1), true}));
    EXPECT_TRUE(predicates::right_band(0.01).test({kPi / 3, 1.0, ClusterId(1), true}));
}

TEST(Probability, MonteCarloAgreesWithRegionRoute) {
    for (double a : {1.7, 2 * kPi / 3, 2.4, 2.9}) {
        const auto mc = prob_alpha_obtuse(a, Method::monte_carlo, {400000, 42, 65536, 0});
        const auto rg = prob_alpha_obtuse(a, Method::region_quadrature);
        ASSERT_TRUE(mc.mc.has_value());
        EXPECT_NEAR(mc.result.p, rg.result.p, 4 * mc.mc->stderr_) << a;
    }
}

TEST(Probability, MonteCarloRejectsLiteralRouteAtFermatAngle) {
    const auto mc = prob_alpha_obtuse(2 * kPi / 3, Method::monte_carlo, {400000, 42, 65536, 0});
    const auto lit = prob_alpha_obtuse(2 * kPi / 3, Method::paper_literal_integral);
    EXPECT_GT(std::abs(mc.result.p - lit.result.p), 20 * mc.mc->stderr_);
}

TEST(Probability, MonteCarloDomain) {
    EXPECT_THROW(prob_alpha_obtuse(0.5, Method::monte_carlo), MethodDomainError);
    EXPECT_THROW(prob_alpha_obtuse(4.0, Method::monte_carlo), MethodDomainError);
}

TEST(Pushforward, GaussianTrianglesAreUniformOnTheSphere) {
    // i.i.d. planar Gaussian vertices push forward to the uniform shape measure.
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> g;
    const int n = 200000;
    int obtuse = 0, fermat = 0;
    for (int i = 0; i < n; ++i) {
        const PlanarTriangle t{{g(gen), g(gen)}, {g(gen), g(gen)}, {g(gen), g(gen)}};
        const auto s = shape_coords(t, ClusterId(1));
        const auto back = shape_coords(reconstruct(s), ClusterId(1));
        ASSERT_NEAR(back.theta, s.theta, 1e-12);
        ASSERT_NEAR(back.phi, s.phi, 1e-12);
        const double m = max_angle(vertex_angles(t)).value;
        obtuse += m > kPi / 2;
        fermat += m >= 2 * kPi / 3;
    }
    const double se = std::sqrt(0.25 * 0.75 / n);
    EXPECT_NEAR(static_cast<double>(obtuse) / n, 0.75, 4 * se);
    EXPECT_NEAR(static_cast<double>(fermat) / n, 0.437088611392799, 4 * std::sqrt(0.44 * 0.56 / n));
}
