#pragma once

// Areas (steradians on the unit shape sphere, total 4 pi) and probabilities
// under the uniform shape measure.
//
// Two routes to the area of {apex angle >= alpha} exist and are kept apart:
//   * paper_literal_area: the printed integral
//       2 |int_{X=0}^{1/2} asin((1 - 2X) / (sqrt(3) k sqrt(1 - X^2))) dX|
//   * region_area: the region theta < theta+(phi) in the apex cluster frame,
//       2 int_0^pi (1 - cos theta+(phi)) dphi,  1 - cos theta = 2V^2/(3 + V^2)
// They disagree away from alpha = pi/2; Monte Carlo decides which one is the
// geometric probability.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "angle_law.hpp"
#include "flow.hpp"
#include "quadrature.hpp"

namespace shapesphere {

inline constexpr double kSphereArea = 4.0 * std::numbers::pi;

enum class Method { cap_closed_form, paper_literal_integral, region_quadrature, monte_carlo };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::cap_closed_form: return "cap_closed_form";
        case Method::paper_literal_integral: return "paper_literal_integral";
        case Method::region_quadrature: return "region_quadrature";
        default: return "monte_carlo";
    }
}

struct AreaResult {
    double value;
    Method method;
    double error_estimate;
};

struct ProbabilityResult {
    double p;
    Method method;
    double error_estimate;
};

class MethodDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Spherical cap of angular radius theta0: 2 pi (1 - cos theta0).
inline AreaResult cap_area(double theta0) {
    if (!(theta0 >= 0.0 && theta0 <= kPi)) throw std::domain_error("cap_area: theta0 must lie in [0, pi]");
    return {2.0 * kPi * (1.0 - std::cos(theta0)), Method::cap_closed_form, 0.0};
}

/// Three disjoint rightness caps of radius pi/3, each covering
/// (1 - cos(pi/3)) / 2 of the sphere. cos(pi/3) = 1/2 is used exactly; the
/// library cosine of the rounded pi/3 is off by one ulp.
inline ProbabilityResult prob_obtuse() {
    constexpr double cos_cap = 0.5;
    return {3.0 * (1.0 - cos_cap) / 2.0, Method::cap_closed_form, 0.0};
}

inline ProbabilityResult prob_acute() {
    const auto o = prob_obtuse();
    return {1.0 - o.p, o.method, 0.0};
}

/// Integrand of the printed area integral, X = cos(theta).
inline double paper_literal_integrand(double k, double x) {
    const double arg = (1.0 - 2.0 * x) / (kSqrt3 * k * std::sqrt(1.0 - x * x));
    return std::asin(std::clamp(arg, -1.0, 1.0));
}

inline AreaResult paper_literal_area(double alpha, const QuadratureSpec& spec = {}) {
    constexpr double kFermat = 2.0 * std::numbers::pi / 3.0;
    if (!(alpha >= kFermat - kSpecialAlphaTolerance && alpha <= kPi))
        throw MethodDomainError(
            "paper-literal integral requires cot(alpha) <= -1/sqrt(3), i.e. alpha in [2pi/3, pi]; "
            "otherwise the arcsin argument leaves [-1, 1] on (0, 1/2)");
    if (alpha >= kPi) return {0.0, Method::paper_literal_integral, 0.0};  // k -> -inf
    // At 2pi/3 exactly, sqrt(3) k = -1.
    const double k = std::abs(alpha - kFermat) <= kSpecialAlphaTolerance ? -1.0 / kSqrt3 : ConstantK::of(alpha).k;
    auto f = [k](double x) { return paper_literal_integrand(k, x); };
    const auto r = adaptive_integrate(f, 0.0, 0.5, spec);
    return {2.0 * std::abs(r.value), Method::paper_literal_integral, 2.0 * r.error_estimate};
}

/// Area of {shapes whose apex angle in one cluster is >= alpha}.
inline AreaResult region_area(double alpha, const QuadratureSpec& spec = {}) {
    if (!(alpha > kPi / 3 && alpha <= kPi)) throw std::domain_error("region_area: alpha must lie in (pi/3, pi]");
    if (alpha >= kPi) return {0.0, Method::region_quadrature, 0.0};
    const double k = std::abs(alpha - kPi / 2) <= kSpecialAlphaTolerance ? 0.0 : ConstantK::of(alpha).k;
    auto f = [k](double phi) {
        const double v = v_plus(k, std::sin(phi));
        return 2.0 * v * v / (3.0 + v * v);
    };
    const auto r = adaptive_integrate(f, 0.0, kPi, spec);
    return {2.0 * r.value, Method::region_quadrature, 2.0 * r.error_estimate};
}

/// Probability of alpha-obtuseness from an analytic area route, using the
/// disjoint union of three per-cluster regions (valid for alpha >= pi/2).
inline ProbabilityResult prob_alpha_obtuse_analytic(double alpha, Method method, const QuadratureSpec& spec = {}) {
    if (method == Method::monte_carlo)
        throw std::invalid_argument("prob_alpha_obtuse_analytic: use the Monte Carlo estimator");
    if (!(alpha >= kPi / 2 - kSpecialAlphaTolerance && alpha <= kPi))
        throw MethodDomainError(
            "analytic probability needs alpha in [pi/2, pi]: below pi/2 the per-cluster regions "
            "overlap; use the monte_carlo method");
    AreaResult a{};
    switch (method) {
        case Method::cap_closed_form:
            if (std::abs(alpha - kPi / 2) > kSpecialAlphaTolerance)
                throw MethodDomainError("cap closed form applies only at alpha = pi/2");
            a = cap_area(kPi / 3);
            break;
        case Method::paper_literal_integral: a = paper_literal_area(alpha, spec); break;
        default: a = region_area(alpha, spec); break;
    }
    return {3.0 * a.value / kSphereArea, method, 3.0 * a.error_estimate / kSphereArea};
}

}  // namespace shapesphere
