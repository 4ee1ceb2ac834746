#ifndef ARSPEC_QUADRATURE_HPP
#define ARSPEC_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include "arspec/errors.hpp"

namespace arspec {

// Adaptive Gauss-Kronrod (G7/K15) integration.  Used as the numeric fallback
// for the spectral CDF and as the independent oracle in tests.
namespace detail {

// K15 nodes/weights on [-1,1]; the odd-index nodes form the embedded G7 rule.
inline constexpr double kK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813};
inline constexpr double kK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
inline constexpr double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double rk = 0.0, rg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kK15Nodes[i]);
        rk += kK15Weights[i] * v;
        if (i % 2 == 1) rg += kG7Weights[i / 2] * v;
    }
    kronrod = rk * h;
    err = std::abs((rk - rg) * h);
}

template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e <= tol || depth > 50) {
        if (depth > 50) throw numerical_error("adaptive quadrature: subdivision limit reached");
        return v;
    }
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

} // namespace detail

template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10) {
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, abs_tol, 0);
}

} // namespace arspec

#endif
