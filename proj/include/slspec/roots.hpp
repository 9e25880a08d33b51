#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "slspec/errors.hpp"

namespace slspec {

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
/// Returns the midpoint of the final bracket of width <= xtol.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NoRootError("bisect: endpoints do not bracket a sign change");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Newton iterations started from x, kept inside [lo, hi] (bisection
/// fallback on escape). Stops when |f| <= ftol or the update stalls.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi,
                     double ftol, int max_iter = 50) {
    for (int i = 0; i < max_iter; ++i) {
        const double fx = f(x);
        if (std::abs(fx) <= ftol) return x;
        const double d = df(x);
        double next = (d != 0.0) ? x - fx / d : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return x;
        // keep the bracket valid for the fallback
        if (f(lo) * fx < 0.0) hi = x; else lo = x;
        x = next;
    }
    return x;
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace slspec
