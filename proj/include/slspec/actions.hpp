#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "slspec/errors.hpp"
#include "slspec/potential.hpp"
#include "slspec/quadrature.hpp"
#include "slspec/roots.hpp"
#include "slspec/specfun.hpp"

namespace slspec {

inline constexpr double kPi = 3.14159265358979323846;

/// Coarse parameter regions: U1 hugs the maximum (a0 <= a < a1), U2 the
/// sign-changing band above the minimum (a2 <= a <= a0), U3 the
/// single-sign band below it (0 <= a <= a2).
enum class CoarseRegion { U1, U2, U3 };

/// Fine lambda-dependent split: A1 = U1; A2/A3 partition U2 at
/// b2 = lambda^{2/9}; A4/A5 partition U3 at |b| = lambda^{1/3}.
enum class FineRegion { A1, A2, A3, A4, A5 };

struct RegionTag {
    CoarseRegion coarse = CoarseRegion::U2;
    std::optional<FineRegion> fine; // needs a lambda to be meaningful
};

inline const char* to_string(CoarseRegion r) {
    switch (r) {
        case CoarseRegion::U1: return "U1";
        case CoarseRegion::U2: return "U2";
        default: return "U3";
    }
}

inline const char* to_string(FineRegion r) {
    switch (r) {
        case FineRegion::A1: return "A1";
        case FineRegion::A2: return "A2";
        case FineRegion::A3: return "A3";
        case FineRegion::A4: return "A4";
        default: return "A5";
    }
}

/// Per-parameter geometric data: turning point, normalized well/barrier
/// actions alpha^2 and alpha2^2, the full action F(a), and the image
/// zeta2 of x = pi under the model change of variables.
struct WellGeometry {
    double a = 0.0;
    RegionTag region;
    double x2 = 0.0;       // turning point; x1 = -x2
    double alpha_sq = 0.0;
    double alpha2_sq = 0.0;
    double F = 0.0;
    double zeta2 = 0.0;
};

/// Largest a whose turning point stays at least 0.5 away from pi
/// (the admissible upper edge of U2; also the lower edge of U1).
/// g is increasing on (0, pi), so this is just g(pi - 0.5).
inline double default_a0(const PotentialSpec& spec) { return spec.g(kPi - 0.5); }

inline CoarseRegion coarse_region(double a, double a2, double a0) {
    if (a >= a0) return CoarseRegion::U1;
    if (a >= a2) return CoarseRegion::U2;
    return CoarseRegion::U3;
}

/// Turning point for parameter a: the root of g(x) = a on (0, pi) when
/// a > a2, the root of h(x) = a on (0, x0] when a < a2, and 0 at the
/// coalescence a = a2. Polished to |g(x2) - a| <= 1e-13 max(1, a1).
inline double turning_point(const PotentialSpec& spec, double a) {
    const double a1 = spec.a1(), a2 = spec.a2();
    if (!(a2 < a1))
        throw NoRootError("turning_point: potential not in canonical orientation");
    if (!(a >= 0.0) || a >= a1)
        throw NoRootError("turning_point: a outside [0, a1)");
    if (a == a2) return 0.0;
    const double ftol = 1e-13 * std::max(1.0, a1);
    if (a > a2) {
        auto f = [&](double x) { return spec.g(x) - a; };
        double x = bisect(f, 0.0, kPi, 1e-9);
        return newton_polish(f, [&](double x_) { return spec.g(x_, 1); }, x, 0.0, kPi, ftol);
    }
    // below a2 the root lives on the continuation branch
    const double x0 = bisect([&](double x) { return spec.h(x); }, 1e-15, kPi - 1e-9, 1e-14);
    auto f = [&](double x) { return spec.h(x) - a; };
    double x = bisect(f, 1e-15, x0, 1e-9);
    return newton_polish(f, [&](double x_) { return spec.h_prime(x_); }, x, 0.0, x0, ftol);
}

/// Action over the classically allowed set,
///     F(a) = integral of sqrt(g - a) over {g > a} within one period.
/// Endpoint square-root zeros are removed by substitution before
/// quadrature; absolute accuracy ~1e-10.
inline double action_F(const PotentialSpec& spec, double a, double quad_tol = 1e-11) {
    const double a1 = spec.a1(), a2 = spec.a2();
    if (!(a >= 0.0 && a <= a1))
        throw std::domain_error("action_F: a outside [0, a1]");
    if (a == a1) return 0.0;
    if (a <= a2) {
        // whole period is allowed; integrand smooth (conical |x| at a = a2 only)
        return 2.0 * integrate([&](double x) { return sqrt_clamped(spec.g(x) - a); },
                               0.0, kPi, quad_tol).value;
    }
    const double x2 = turning_point(spec, a);
    return 2.0 * integrate_sqrt_edge(
                     [&](double x) { return sqrt_clamped(spec.g(x) - a); }, x2, kPi, quad_tol)
                     .value;
}

namespace detail {

// integral of sqrt(a - g) over half the forbidden well [0, x2], sqrt zero at x2
inline double barrier_half_integral(const PotentialSpec& spec, double a, double x2,
                                    double quad_tol) {
    return integrate_sqrt_edge(
               [&](double y) { return sqrt_clamped(a - spec.g(x2 - y)); }, 0.0, x2, quad_tol)
        .value;
}

// integral of sqrt(h - a) over [0, x2h], sqrt zero at x2h
inline double continuation_half_integral(const PotentialSpec& spec, double a, double x2h,
                                         double quad_tol) {
    return integrate_sqrt_edge(
               [&](double y) { return sqrt_clamped(spec.h(x2h - y) - a); }, 0.0, x2h, quad_tol)
        .value;
}

} // namespace detail

/// Normalized action pair (alpha^2, alpha2^2):
///   U1: alpha^2 over the allowed well around the maximum (= F/pi),
///       alpha2^2 over the forbidden set;
///   U2: alpha^2 = alpha2^2 = (2/pi) integral of sqrt(a - g) between the
///       turning points;
///   U3: the same with the continuation, (2/pi) integral of sqrt(h - a).
inline std::pair<double, double> alpha_squares(const PotentialSpec& spec, double a,
                                               double a0 = std::numeric_limits<double>::quiet_NaN(),
                                               double quad_tol = 1e-11) {
    if (std::isnan(a0)) a0 = default_a0(spec);
    const double a2 = spec.a2();
    if (a == a2) return {0.0, 0.0};
    const double x2 = turning_point(spec, a);
    if (a > a2) {
        const double barrier = (4.0 / kPi) * detail::barrier_half_integral(spec, a, x2, quad_tol);
        if (a >= a0) return {action_F(spec, a, quad_tol) / kPi, barrier};
        return {barrier, barrier};
    }
    const double well = (4.0 / kPi) * detail::continuation_half_integral(spec, a, x2, quad_tol);
    return {well, well};
}

/// zeta2(a): solves the region's implicit matching relation. The x-side
/// integral (computed as in action_F) equals the closed-form zeta-side
/// integral of the model equation:
///   U1: int_0^{x2} sqrt(a-g) dx       = int_alpha^{zeta2} sqrt(z^2 - alpha^2) dz
///   U2: F(a)/2                        = int_alpha^{zeta2} sqrt(z^2 - alpha^2) dz
///   U3: F(a)/2                        = int_0^{zeta2}     sqrt(z^2 + alpha^2) dz
/// Solved by monotone bracketing + Newton to residual <= 1e-10; the
/// coalescence alpha = 0 short-circuits to zeta2 = sqrt(2 LHS).
inline double zeta2(const PotentialSpec& spec, double a,
                    double a0 = std::numeric_limits<double>::quiet_NaN(),
                    double quad_tol = 1e-11) {
    if (std::isnan(a0)) a0 = default_a0(spec);
    const double a2 = spec.a2();
    const CoarseRegion reg = coarse_region(a, a2, a0);
    const auto [alpha_sq, alpha2_sq] = alpha_squares(spec, a, a0, quad_tol);

    double lhs;
    if (reg == CoarseRegion::U1)
        lhs = (kPi / 4.0) * alpha2_sq; // same barrier integral, renormalized
    else
        lhs = 0.5 * action_F(spec, a, quad_tol);

    const double asq = (reg == CoarseRegion::U1) ? action_F(spec, a, quad_tol) / kPi : alpha_sq;
    if (asq < 1e-14) return std::sqrt(2.0 * lhs);
    const double alpha = std::sqrt(asq);

    const bool hyperbolic = (reg == CoarseRegion::U3);
    auto closed_form = [&](double z) {
        if (hyperbolic) {
            const double r = std::sqrt(z * z + asq);
            return 0.5 * z * r + 0.5 * asq * std::log((z + r) / alpha);
        }
        const double r = std::sqrt(std::max(z * z - asq, 0.0));
        return 0.5 * z * r - 0.5 * asq * std::log((z + r) / alpha);
    };
    auto phi = [&](double z) { return closed_form(z) - lhs; };

    double lo = hyperbolic ? 0.0 : alpha;
    double hi = std::max(2.0 * alpha, 1.0);
    int guard = 0;
    while (phi(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 60) throw NoRootError("zeta2: bracketing failed (geometry bug)");
    }
    double z = bisect(phi, lo, hi, 1e-6);
    auto dphi = [&](double z_) {
        return std::sqrt(std::max(hyperbolic ? z_ * z_ + asq : z_ * z_ - asq, 0.0));
    };
    z = newton_polish(phi, dphi, z, lo, hi, 1e-12);
    return z;
}

/// All geometric quantities for one parameter value, computed once.
inline WellGeometry well_geometry(const PotentialSpec& spec, double a,
                                  double a0 = std::numeric_limits<double>::quiet_NaN(),
                                  double quad_tol = 1e-11) {
    if (std::isnan(a0)) a0 = default_a0(spec);
    WellGeometry geom;
    geom.a = a;
    geom.region.coarse = coarse_region(a, spec.a2(), a0);
    geom.x2 = turning_point(spec, a);
    const auto [asq, a2sq] = alpha_squares(spec, a, a0, quad_tol);
    geom.alpha_sq = asq;
    geom.alpha2_sq = a2sq;
    geom.F = action_F(spec, a, quad_tol);
    geom.zeta2 = zeta2(spec, a, a0, quad_tol);
    return geom;
}

/// Connection coefficient k(b) = (1 + e^{2 pi b})^{1/2} - e^{pi b},
/// evaluated through the reciprocal form for b >= 0 (no cancellation,
/// no overflow); the direct form is already stable for b < 0.
inline double connection_k(double b) {
    if (b >= 0.0) {
        const double e = std::exp(-kPi * b);
        return e / (1.0 + std::sqrt(1.0 + e * e));
    }
    const double e = std::exp(kPi * b);
    return std::sqrt(1.0 + e * e) - e;
}

/// Parabolic-cylinder parameter b2 at spectral parameter lambda:
/// +lambda alpha2^2 / 2 above the transition, -lambda alpha2^2 / 2 below.
inline double b2_param(double a, double a2, double alpha2_sq, double lambda) {
    const double mag = 0.5 * lambda * alpha2_sq;
    return a >= a2 ? mag : -mag;
}

/// Spectral-parameter bundle at (a, lambda).
struct SpectralParameters {
    double lambda = 0.0;
    double b = 0.0;     // +lambda alpha^2/2 in U2, -lambda alpha^2/2 in U1 and U3
    double b2 = 0.0;
    double k_of_b = 0.0;
    double Psi = std::numeric_limits<double>::quiet_NaN(); // defined in U2/U3
};

inline SpectralParameters spectral_params(const PotentialSpec& spec, const WellGeometry& geom,
                                          double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("spectral_params: lambda must be positive");
    SpectralParameters sp;
    sp.lambda = lambda;
    const double half = 0.5 * lambda * geom.alpha_sq;
    sp.b = (geom.region.coarse == CoarseRegion::U2) ? half : -half;
    sp.b2 = b2_param(geom.a, spec.a2(), geom.alpha2_sq, lambda);
    sp.k_of_b = connection_k(sp.b);
    if (geom.region.coarse != CoarseRegion::U1)
        sp.Psi = lambda * geom.zeta2 * geom.zeta2 -
                 2.0 * sp.b * std::log(geom.zeta2 * std::sqrt(2.0 * lambda)) +
                 specfun::arg_gamma(sp.b);
    return sp;
}

inline SpectralParameters spectral_params(const PotentialSpec& spec, double a, double lambda,
                                          double a0 = std::numeric_limits<double>::quiet_NaN()) {
    return spectral_params(spec, well_geometry(spec, a, a0), lambda);
}

/// Fine region at (a, lambda): A1 for a >= a0; A2/A3 split U2 at
/// b2 = lambda^{2/9}; A4/A5 split U3 at |b| = lambda^{1/3}.
inline FineRegion classify_region(const PotentialSpec& spec, const WellGeometry& geom,
                                  double lambda,
                                  double a0 = std::numeric_limits<double>::quiet_NaN()) {
    if (std::isnan(a0)) a0 = default_a0(spec);
    if (!(lambda > 0.0)) throw std::domain_error("classify_region: lambda must be positive");
    const double a = geom.a, a2 = spec.a2();
    if (a >= a0) return FineRegion::A1;
    if (a >= a2) {
        const double b2 = b2_param(a, a2, geom.alpha2_sq, lambda);
        return (a > a2 && b2 >= std::pow(lambda, 2.0 / 9.0)) ? FineRegion::A2 : FineRegion::A3;
    }
    const double b = 0.5 * lambda * geom.alpha_sq;
    return (b < std::cbrt(lambda)) ? FineRegion::A4 : FineRegion::A5;
}

inline FineRegion classify_region(const PotentialSpec& spec, double a, double lambda,
                                  double a0 = std::numeric_limits<double>::quiet_NaN()) {
    return classify_region(spec, well_geometry(spec, a, a0), lambda, a0);
}

} // namespace slspec
