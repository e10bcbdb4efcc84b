#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// The panel with the largest error estimate is bisected until the summed
// estimate meets the tolerance. The interval is first mapped to [0, 1] by
// x = a + (b - a) t^2 (3 - 2t), whose Jacobian 6t(1 - t) vanishes at both
// ends: inverse-square-root endpoint singularities become bounded and the
// endpoints themselves are never evaluated.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapesphere {

struct QuadratureSpec {
    double abs_tolerance = 1e-10;
    int max_depth = 60;
    int max_panels = 200000;
};

struct QuadratureResult {
    double value;
    double error_estimate;
    int panels;
};

/// Thrown when refinement stalls at max_depth; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

namespace detail {

// Kronrod abscissae on [-1, 1] (non-negative half) and weights; odd indices
// are the embedded Gauss nodes.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error;
    int depth;
};

// QUADPACK-style error estimate: the raw |K15 - G7| difference is rescaled
// by the integrand's variation about its mean on the panel.
template <class F>
Panel gk15(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 7> f1{}, f2{};
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double resabs = std::abs(kron);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        const double s = f1[j] + f2[j];
        kron += kWgk[j] * s;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    const double mean = 0.5 * kron;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    double err = std::abs((kron - gauss) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, kron * h, err, depth};
}

}  // namespace detail

template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("integration limits must be finite");
    if (a == b) return {0.0, 0.0, 0};
    if (a > b) {
        auto r = adaptive_integrate(f, b, a, spec);
        return {-r.value, r.error_estimate, r.panels};
    }
    const double width = b - a;
    auto g = [&f, a, width](double t) {
        const double jac = 6.0 * t * (1.0 - t) * width;
        return jac == 0.0 ? 0.0 : f(a + width * t * t * (3.0 - 2.0 * t)) * jac;
    };
    auto worse = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(worse)> open(worse);
    std::vector<detail::Panel> done;  // panels that can no longer be split
    open.push(detail::gk15(g, 0.0, 1.0, 0));
    double total_err = open.top().error;
    int panels = 1;

    while (!open.empty() && total_err > spec.abs_tolerance) {
        const auto p = open.top();
        open.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (p.depth >= spec.max_depth || panels >= spec.max_panels || mid <= p.a || mid >= p.b) {
            done.push_back(p);
            continue;
        }
        const auto left = detail::gk15(g, p.a, mid, p.depth + 1);
        const auto right = detail::gk15(g, mid, p.b, p.depth + 1);
        total_err += left.error + right.error - p.error;
        open.push(left);
        open.push(right);
        ++panels;
    }
    while (!open.empty()) {
        done.push_back(open.top());
        open.pop();
    }
    // Fixed summation order for reproducibility.
    std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    double value = 0.0, err = 0.0;
    for (const auto& p : done) {
        value += p.value;
        err += p.error;
    }
    QuadratureResult r{value, err, panels};
    if (err > spec.abs_tolerance) {
        throw QuadratureError("adaptive_integrate: tolerance not reached before depth exhaustion", r);
    }
    return r;
}

}  // namespace shapesphere
