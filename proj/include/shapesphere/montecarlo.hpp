#pragma once

// Monte Carlo oracle on the uniform shape-sphere measure.
//
// Random numbers come from a counter-based SplitMix64: output i for a seed is
// mix(seed + (i + 1) * golden_gamma), which equals the i-th draw of the usual
// sequential SplitMix64. Sample j consumes counters 2j and 2j + 1, so any
// chunking or thread count sees the same stream.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "angle_law.hpp"
#include "measure.hpp"
#include "shape_map.hpp"

namespace shapesphere {

class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t at(std::uint64_t counter) const { return mix(seed_ + (counter + 1) * kGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Sample j of the uniform area measure: cos(theta) uniform on [-1, 1],
/// phi uniform on the circle. Cluster-1 frame.
inline ShapeCoords sample_uniform_shape(const CounterRng& rng, std::uint64_t j) {
    const double z = 2.0 * rng.uniform(2 * j) - 1.0;
    double phi = 2.0 * kPi * rng.uniform(2 * j + 1);
    if (phi > kPi) phi -= 2.0 * kPi;
    return {std::acos(z), phi, ClusterId(1), true};
}

struct McConfig {
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t chunk_size = 65536;
    unsigned threads = 0;  // 0: hardware concurrency; never affects results
};

struct McEstimate {
    double p_hat;
    double stderr_;
    std::uint64_t n;
    std::uint64_t hits;
    std::string predicate;
    std::uint64_t seed;
};

struct ShapePredicate {
    std::string name;
    std::function<bool(const ShapeCoords&)> test;
};

/// Frequency estimate; deterministic in (n, seed, chunk_size).
inline McEstimate estimate(const ShapePredicate& pred, const McConfig& cfg) {
    if (cfg.n == 0) throw std::invalid_argument("estimate: n must be positive");
    if (cfg.chunk_size == 0) throw std::invalid_argument("estimate: chunk_size must be positive");
    const CounterRng rng(cfg.seed);
    const std::uint64_t chunks = (cfg.n + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<std::uint64_t> chunk_hits(chunks, 0);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t begin = c * cfg.chunk_size;
            const std::uint64_t end = std::min(cfg.n, begin + cfg.chunk_size);
            std::uint64_t h = 0;
            for (std::uint64_t j = begin; j < end; ++j)
                if (pred.test(sample_uniform_shape(rng, j))) ++h;
            chunk_hits[c] = h;
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::uint64_t hits = 0;
    for (auto h : chunk_hits) hits += h;
    const double p = static_cast<double>(hits) / static_cast<double>(cfg.n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.n)), cfg.n, hits, pred.name, cfg.seed};
}

/// Maximal angle through reconstruct + planar angles; empty at collisions.
inline std::optional<double> alpha_max_exact(const ShapeCoords& s) {
    try {
        return max_angle_from_shape(s).alpha_max;
    } catch (const DegenerateTriangleError&) {
        return std::nullopt;
    }
}

namespace predicates {

inline ShapePredicate alpha_obtuse(double alpha) {
    return {"alpha_obtuse(" + std::to_string(alpha) + ")", [alpha](const ShapeCoords& s) {
                const auto m = alpha_max_exact(s);
                return m && *m > alpha;
            }};
}

inline ShapePredicate obtuse() {
    auto p = alpha_obtuse(kPi / 2);
    p.name = "obtuse";
    return p;
}

/// alpha_max >= 2pi/3: the Fermat point sits at a vertex.
inline ShapePredicate fermat_obtuse() {
    return {"fermat_obtuse", [](const ShapeCoords& s) {
                const auto m = alpha_max_exact(s);
                return m && *m >= kFermatAngle;
            }};
}

inline ShapePredicate alpha_at_least(double alpha) {
    return {"alpha_max_at_least(" + std::to_string(alpha) + ")", [alpha](const ShapeCoords& s) {
                const auto m = alpha_max_exact(s);
                return m && *m >= alpha;
            }};
}

inline ShapePredicate right_band(double eps) {
    return {"right_band(" + std::to_string(eps) + ")", [eps](const ShapeCoords& s) {
                const auto m = alpha_max_exact(s);
                return m && std::abs(*m - kPi / 2) < eps;
            }};
}

inline ShapePredicate cluster_obtuse(ClusterId k) {
    return {"cluster_" + std::to_string(k.value()) + "_obtuse", [k](const ShapeCoords& s) {
                const auto t = reconstruct(s);
                if (degeneracy(t).kind == DegeneracyKind::binary_collision) return false;
                return vertex_angles(t)[k.apex()] > kPi / 2;
            }};
}

/// Analytic cap theta < theta0 in the cluster-1 frame (calibration only).
inline ShapePredicate cap(double theta0) {
    return {"cap(" + std::to_string(theta0) + ")", [theta0](const ShapeCoords& s) { return s.theta < theta0; }};
}

}  // namespace predicates

struct ProbabilityReport {
    ProbabilityResult result;
    std::optional<McEstimate> mc;
};

/// Probability of alpha-obtuseness by the chosen method. Analytic methods
/// need alpha >= pi/2 (disjoint per-cluster regions); Monte Carlo covers
/// [pi/3, pi].
inline ProbabilityReport prob_alpha_obtuse(double alpha, Method method, const McConfig& mc = {},
                                           const QuadratureSpec& spec = {}) {
    if (method != Method::monte_carlo) return {prob_alpha_obtuse_analytic(alpha, method, spec), std::nullopt};
    if (!(alpha >= kPi / 3 && alpha <= kPi)) throw MethodDomainError("monte carlo: alpha must lie in [pi/3, pi]");
    const auto e = estimate(predicates::alpha_at_least(alpha), mc);
    return {{e.p_hat, Method::monte_carlo, e.stderr_}, e};
}

}  // namespace shapesphere
