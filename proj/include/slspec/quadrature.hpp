#pragma once

#include <cmath>
#include <cstdlib>

namespace slspec {

/// Result of an adaptive integration: value plus the accumulated
/// Kronrod error estimate of the accepted panels.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

namespace detail {

// Gauss(7)/Kronrod(15) nodes on [-1,1]: {abscissa, Gauss weight, Kronrod weight}.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class F>
double gk15_panel(F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kGk15[0][1] * f0;
    double k15 = kGk15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hw * kGk15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kGk15[i][1] * fi;
        k15 += kGk15[i][2] * fi;
    }
    g7 *= hw;
    k15 *= hw;
    const double d = 200.0 * std::abs(k15 - g7);
    err = d * std::sqrt(d);
    return k15;
}

template <class F>
void gk15_adaptive(F& f, double a, double b, double tol, int depth,
                   QuadResult& acc) {
    double err;
    const double v = gk15_panel(f, a, b, err);
    acc.evaluations += 15;
    if (err <= tol || depth >= 48) {
        acc.value += v;
        acc.error += err;
        return;
    }
    const double mid = 0.5 * (a + b);
    gk15_adaptive(f, a, mid, 0.5 * tol, depth + 1, acc);
    gk15_adaptive(f, mid, b, 0.5 * tol, depth + 1, acc);
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute
/// tolerance abs_tol. The integrand must be finite on the closed interval.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-11) {
    QuadResult acc;
    if (a == b) return acc;
    detail::gk15_adaptive(f, a, b, abs_tol, 0, acc);
    return acc;
}

/// Integral over [edge, far] of an integrand with a square-root zero at
/// `edge` (f(x) ~ c*sqrt(x-edge)). The substitution x = edge + t^2 makes
/// the transformed integrand smooth, so plain adaptive panels converge.
template <class F>
QuadResult integrate_sqrt_edge(F&& f, double edge, double far, double abs_tol = 1e-11) {
    const double span = far - edge;
    if (span <= 0.0) return {};
    const double tmax = std::sqrt(span);
    return integrate(
        [&](double t) { return 2.0 * t * f(edge + t * t); }, 0.0, tmax, abs_tol);
}

/// sqrt clamped at zero; shields turning-point roundoff (g - a may come
/// out at -1e-17 right at a located root).
inline double sqrt_clamped(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

} // namespace slspec
