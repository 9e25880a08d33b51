#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace slspec::specfun {

inline constexpr double kPi = 3.14159265358979323846;

/// psi(1/2) = -gamma - 2 ln 2 (the digamma value -1.9635...).
inline constexpr double psi_half() { return -1.9635100260214234794; }

/// zeta(3)-derived cubic coefficient of the small-x series of
/// arg Gamma(1/2 + ix): A3 = (7/3) zeta(3).
inline constexpr double kA3 = 2.8047994407057199993;

/// arctan(e^t) without overflow for large |t|.
inline double arctan_exp(double t) {
    if (t >= 0.0) return 0.5 * kPi - std::atan(std::exp(-t));
    return std::atan(std::exp(t));
}

namespace detail {

// Partial-fraction series x psi(1/2) + sum_{n>=0} [v - atan v], v = 2x/(2n+1),
// truncated at N with an Euler-Maclaurin tail (integral + f/2 - f'/12 + f'''/720).
// Good to ~1e-13 absolute for 0 < x <= 10.
inline double arg_gamma_series(double x) {
    const int n_terms = std::max(48, static_cast<int>(10.0 * x) + 1);
    double s = 0.0;
    for (int n = n_terms - 1; n >= 0; --n) {
        const double v = 2.0 * x / (2.0 * n + 1.0);
        s += v - std::atan(v);
    }
    const double v = 2.0 * x / (2.0 * n_terms + 1.0);
    const double v2 = v * v;
    const double integral = x * (std::atan(v) / v + 0.5 * std::log1p(v2) - 1.0);
    const double f = v - std::atan(v);
    const double fp = -v2 * v2 / (x * (1.0 + v2));
    const double fppp = -2.0 * v2 * v2 * v2 * (10.0 + 9.0 * v2 + 3.0 * v2 * v2) /
                        (x * x * x * (1.0 + v2) * (1.0 + v2) * (1.0 + v2));
    return x * psi_half() + s + integral + 0.5 * f - fp / 12.0 + fppp / 720.0;
}

// Stirling sum Im[(z - 1/2) log z - z + sum B_{2n} / (2n(2n-1) z^{2n-1})]
// at z = 1/2 + ix, through B12. Error O(|z|^-13): below 1e-13 for x >= 8.
inline double arg_gamma_stirling(double x) {
    static constexpr double coeff[6] = {
        1.0 / 12.0,   -1.0 / 360.0,      1.0 / 1260.0,
        -1.0 / 1680.0, 1.0 / 1188.0,     -691.0 / 360360.0,
    };
    const std::complex<double> z(0.5, x);
    std::complex<double> w = (z - 0.5) * std::log(z) - z;
    const std::complex<double> z2 = z * z;
    std::complex<double> zp = z;
    for (double c : coeff) {
        w += c / zp;
        zp *= z2;
    }
    return w.imag();
}

} // namespace detail

/// arg Gamma(1/2 + ix), branch with arg z = 0 on the positive reals.
/// Odd in x; absolute accuracy ~1e-12 for moderate |x|.
inline double arg_gamma(double x) {
    if (!(std::abs(x) <= 1e6))
        throw std::domain_error("arg_gamma: |x| must be <= 1e6");
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    const double r = (ax <= 8.0) ? detail::arg_gamma_series(ax)
                                 : detail::arg_gamma_stirling(ax);
    return x > 0.0 ? r : -r;
}

enum class HMethod { direct, small_x_series, large_x_series };

struct HEvaluation {
    double x = 0.0;
    double h_plus = 0.0;
    double h_minus = 0.0;
    HMethod method = HMethod::direct;
};

/// The two interpolation phase functions
///     H+-(x) = +-arctan(e^{pi x}) - x + x ln|x| - arg Gamma(1/2 + ix),
/// evaluated from the definition everywhere (x ln|x| := 0 at x = 0).
/// They carry the correction to the Bohr-Sommerfeld phase: H -> 0 deep on
/// the single-sign side (x -> -inf) and H -> +-pi/2 deep on the
/// sign-changing side, with H+-(0) = +-pi/4 at the transition.
inline HEvaluation h_pm(double x) {
    if (!std::isfinite(x)) throw std::domain_error("h_pm: x must be finite");
    const double xl = (x == 0.0) ? 0.0 : x * std::log(std::abs(x));
    const double common = -x + xl - arg_gamma(x);
    const double at = arctan_exp(kPi * x);
    return {x, at + common, -at + common, HMethod::direct};
}

enum class HKind { small_x, large_x };

/// Truncated expansions of H+- used only as cross-validation oracles:
///   large (|x| >= 2):  +-pi/2 - 1/(24x) - 7/(2880 x^3)   (x > 0)
///                      -1/(24x) - 7/(2880 x^3)           (x < 0)
///   small (|x| <= 0.2): +-pi/4 + x ln|x| + x(+-pi/2 - 1 - psi(1/2))
///                       + x^3 (-+pi^3/12 - A3)
/// The x < 0 row follows from the reflection identity
/// H(-x) = +-pi/2 - H(x); both branches share it because their difference
/// 2 arctan e^{pi x} is beyond all orders for x -> -inf.
inline double h_expansion(double x, HKind kind, int sign) {
    if (sign != 1 && sign != -1)
        throw std::domain_error("h_expansion: sign must be +-1");
    if (kind == HKind::large_x) {
        if (!(std::abs(x) >= 2.0))
            throw std::domain_error("h_expansion: large-x form needs |x| >= 2");
        const double x3 = x * x * x;
        if (x > 0.0) return sign * 0.5 * kPi - 1.0 / (24.0 * x) - 7.0 / (2880.0 * x3);
        return -1.0 / (24.0 * x) - 7.0 / (2880.0 * x3);
    }
    if (!(std::abs(x) <= 0.2))
        throw std::domain_error("h_expansion: small-x form needs |x| <= 0.2");
    const double xl = (x == 0.0) ? 0.0 : x * std::log(std::abs(x));
    return sign * 0.25 * kPi + xl + x * (sign * 0.5 * kPi - 1.0 - psi_half()) +
           x * x * x * (-sign * kPi * kPi * kPi / 12.0 - kA3);
}

struct HMinimum {
    double x_star = 0.0;
    double h_star = 0.0;
};

namespace detail {

// five-point central difference of H_sign; error ~ h^4 H^(5)/30 + eps/h
inline double h_derivative_fd(int sign, double x, double h) {
    auto H = [sign](double t) {
        const HEvaluation e = h_pm(t);
        return sign > 0 ? e.h_plus : e.h_minus;
    };
    return (-H(x + 2.0 * h) + 8.0 * H(x + h) - 8.0 * H(x - h) + H(x - 2.0 * h)) /
           (12.0 * h);
}

} // namespace detail

/// Location and value of the minimum of H_sign on x > 0. Golden-section
/// localization, then bisection on the central-difference derivative down
/// to |H'| <= 1e-10.
inline HMinimum h_minimum(int sign) {
    if (sign != 1 && sign != -1)
        throw std::domain_error("h_minimum: sign must be +-1");
    auto H = [sign](double t) {
        const HEvaluation e = h_pm(t);
        return sign > 0 ? e.h_plus : e.h_minus;
    };
    double lo = (sign > 0) ? 1e-3 : 0.2;
    double hi = (sign > 0) ? 0.3 : 6.0;
    // golden section localization
    constexpr double inv_phi = 0.6180339887498949;
    {
        double a = lo, b = hi;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = H(c), fd = H(d);
        while (b - a > 1e-7) {
            if (fc < fd) {
                b = d; d = c; fd = fc;
                c = b - inv_phi * (b - a); fc = H(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + inv_phi * (b - a); fd = H(d);
            }
        }
        lo = a; hi = b;
    }
    const double fd_step = 1e-4;
    double bra = lo - 1e-3, ket = hi + 1e-3;
    if (sign > 0) bra = std::max(bra, 5.0 * fd_step);
    double dbra = detail::h_derivative_fd(sign, bra, fd_step);
    double dket = detail::h_derivative_fd(sign, ket, fd_step);
    for (int i = 0; i < 8 && (dbra > 0.0) == (dket > 0.0); ++i) {
        bra = std::max(sign > 0 ? 5.0 * fd_step : 0.05, bra - 0.05);
        ket += 0.05;
        dbra = detail::h_derivative_fd(sign, bra, fd_step);
        dket = detail::h_derivative_fd(sign, ket, fd_step);
    }
    while (ket - bra > 1e-13) {
        const double mid = 0.5 * (bra + ket);
        const double dm = detail::h_derivative_fd(sign, mid, fd_step);
        if ((dm > 0.0) == (dbra > 0.0)) {
            bra = mid; dbra = dm;
        } else {
            ket = mid;
        }
    }
    const double xs = 0.5 * (bra + ket);
    return {xs, H(xs)};
}

} // namespace slspec::specfun
