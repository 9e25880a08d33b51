#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "slspec/actions.hpp"
#include "slspec/errors.hpp"
#include "slspec/ode.hpp"
#include "slspec/potential.hpp"

namespace slspec {

/// Fundamental solution over one period from identity initial data.
/// The trace (Floquet discriminant) equals 2 exactly at periodic
/// eigenvalues; |det - 1| measures integration drift (the flow is
/// symplectic, so det must stay at 1).
struct MonodromyRecord {
    double lambda = 0.0;
    double a = 0.0;
    std::array<std::array<double, 2>, 2> matrix{};
    double discriminant = 0.0;
    double wronskian_error = 0.0;
    long steps = 0;
};

enum class Symmetry { dirichlet, neumann };

inline const char* to_string(Symmetry s) {
    return s == Symmetry::dirichlet ? "D" : "N";
}

/// Numerically located eigenvalue of the half-period D or N problem.
/// nodes_half counts zeros of the eigenfunction in (0, pi); nodes_full
/// the zeros of its odd (D) / even (N) periodic extension on [-pi, pi).
struct OracleEigenvalue {
    double lambda = 0.0;
    Symmetry symmetry = Symmetry::dirichlet;
    int nodes_half = 0;
    int nodes_full = 0;
    double bracket_width = 0.0;
    double discriminant_residual = std::numeric_limits<double>::quiet_NaN();
};

struct OracleOptions {
    IntegrationOptions ode;
    double bracket_rel_tol = 1e-10; // bisect until width <= this * lambda
};

inline MonodromyRecord monodromy(const PotentialSpec& spec, double a, double lambda,
                                 const OracleOptions& opt = {}) {
    if (!(lambda > 0.0 && lambda <= opt.ode.lambda_max))
        throw std::domain_error("monodromy: lambda outside (0, lambda_max]");
    MonodromyRecord rec;
    rec.lambda = lambda;
    rec.a = a;
    PairState y{1.0, 0.0, 0.0, 1.0 / lambda};
    rec.steps = integrate_pair([&](double x) { return spec.g(x) - a; }, lambda, y, -kPi, kPi,
                               opt.ode);
    rec.matrix[0][0] = y[0];
    rec.matrix[0][1] = y[2];
    rec.matrix[1][0] = lambda * y[1];
    rec.matrix[1][1] = lambda * y[3];
    rec.discriminant = rec.matrix[0][0] + rec.matrix[1][1];
    rec.wronskian_error = std::abs(
        rec.matrix[0][0] * rec.matrix[1][1] - rec.matrix[0][1] * rec.matrix[1][0] - 1.0);
    return rec;
}

namespace detail {

// shooting functional: u(pi) for D data (0,1), u'(pi) for N data (1,0)
template <class R>
double shoot_value(R& r, double lambda, Symmetry sym, const IntegrationOptions& opt) {
    OscState y = (sym == Symmetry::dirichlet) ? OscState{0.0, 1.0 / lambda}
                                              : OscState{1.0, 0.0};
    integrate_scaled(r, lambda, y, 0.0, kPi, opt, [](double, const OscState&) {});
    return (sym == Symmetry::dirichlet) ? y[0] : y[1];
}

// zeros of u in (0, pi); for D data the drifting boundary zero at pi is
// masked by a half-wavelength guard (the final sign there is roundoff)
template <class R>
int count_half_period_nodes(R& r, const PotentialSpec& spec, double a, double lambda,
                            Symmetry sym, const IntegrationOptions& opt) {
    const double r_end = std::max(spec.a1() - a, 1e-2);
    const double guard = (sym == Symmetry::dirichlet)
                             ? kPi - 0.5 * kPi / (lambda * std::sqrt(r_end))
                             : kPi + 1.0;
    OscState y = (sym == Symmetry::dirichlet) ? OscState{0.0, 1.0 / lambda}
                                              : OscState{1.0, 0.0};
    int nodes = 0;
    double prev_sign = (sym == Symmetry::dirichlet) ? 1.0 : (y[0] > 0.0 ? 1.0 : -1.0);
    integrate_scaled(r, lambda, y, 0.0, kPi, opt, [&](double x, const OscState& s) {
        if (x >= guard || s[0] == 0.0) return;
        const double sign = (s[0] > 0.0) ? 1.0 : -1.0;
        if (sign == -prev_sign && x > 1e-12) ++nodes;
        prev_sign = sign;
    });
    return nodes;
}

struct Bracket {
    double lo = 0.0, hi = 0.0;
};

} // namespace detail

/// Scan-and-bisect eigenvalue search for one symmetry class on the
/// window [lambda_lo, lambda_hi]. The scan step pi/(4F) is a quarter of
/// the same-symmetry spacing 2 pi / F, so simple roots cannot hide
/// between samples; a node-count gap in the results still triggers one
/// refinement pass at 4x density before giving up.
inline std::vector<OracleEigenvalue> shoot_eigen(const PotentialSpec& spec, double a,
                                                 Symmetry sym, double lambda_lo,
                                                 double lambda_hi,
                                                 const OracleOptions& opt = {}) {
    if (!(lambda_lo > 0.0 && lambda_hi > lambda_lo && lambda_hi <= opt.ode.lambda_max))
        throw std::domain_error("shoot_eigen: bad lambda window");
    if (!spec.min_at_origin())
        throw std::domain_error("shoot_eigen: potential not in canonical orientation");
    auto r = [&](double x) { return spec.g(x) - a; };
    const double F = action_F(spec, a);
    const double scan_step = kPi / (4.0 * F);

    auto scan = [&](double lo, double hi, double step) {
        std::vector<detail::Bracket> brackets;
        const int m = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
        double prev_l = lo;
        double prev_v = detail::shoot_value(r, prev_l, sym, opt.ode);
        for (int i = 1; i <= m; ++i) {
            const double l = lo + (hi - lo) * i / m;
            const double v = detail::shoot_value(r, l, sym, opt.ode);
            if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0) || v == 0.0)
                brackets.push_back({prev_l, l});
            prev_l = l;
            prev_v = v;
        }
        return brackets;
    };

    auto bisect_bracket = [&](detail::Bracket br) {
        double lo = br.lo, hi = br.hi;
        double flo = detail::shoot_value(r, lo, sym, opt.ode);
        while (hi - lo > opt.bracket_rel_tol * lo) {
            const double mid = 0.5 * (lo + hi);
            const double fm = detail::shoot_value(r, mid, sym, opt.ode);
            if (fm == 0.0) {
                lo = mid - 0.25 * opt.bracket_rel_tol * mid;
                hi = mid + 0.25 * opt.bracket_rel_tol * mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        OracleEigenvalue e;
        e.lambda = 0.5 * (lo + hi);
        e.symmetry = sym;
        e.bracket_width = hi - lo;
        e.nodes_half = detail::count_half_period_nodes(r, spec, a, e.lambda, sym, opt.ode);
        e.nodes_full = (sym == Symmetry::dirichlet) ? 2 * e.nodes_half + 2 : 2 * e.nodes_half;
        return e;
    };

    std::vector<OracleEigenvalue> out;
    for (const auto& br : scan(lambda_lo, lambda_hi, scan_step))
        out.push_back(bisect_bracket(br));

    // consecutive same-symmetry eigenvalues must step the node count by 1
    for (int pass = 0; pass < 2; ++pass) {
        bool gap_found = false;
        std::vector<OracleEigenvalue> extra;
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (out[i].nodes_half - out[i - 1].nodes_half >= 2) {
                gap_found = true;
                for (const auto& br :
                     scan(out[i - 1].lambda, out[i].lambda, scan_step / 4.0))
                    extra.push_back(bisect_bracket(br));
            }
        }
        if (!gap_found) break;
        if (pass == 1 || extra.empty())
            throw MissedRootError("shoot_eigen: node-count gap persists after refinement");
        for (auto& e : extra) {
            const bool dup = std::any_of(out.begin(), out.end(), [&](const OracleEigenvalue& o) {
                return std::abs(o.lambda - e.lambda) < 10.0 * opt.bracket_rel_tol * e.lambda;
            });
            if (!dup) out.push_back(std::move(e));
        }
        std::sort(out.begin(), out.end(),
                  [](const OracleEigenvalue& x, const OracleEigenvalue& y) {
                      return x.lambda < y.lambda;
                  });
    }
    return out;
}

/// Union of the D and N spectra on the window, sorted, with the Floquet
/// discriminant residual |trace - 2| recorded per entry.
inline std::vector<OracleEigenvalue> periodic_spectrum(const PotentialSpec& spec, double a,
                                                       double lambda_lo, double lambda_hi,
                                                       const OracleOptions& opt = {}) {
    std::vector<OracleEigenvalue> all = shoot_eigen(spec, a, Symmetry::dirichlet, lambda_lo,
                                                    lambda_hi, opt);
    std::vector<OracleEigenvalue> n = shoot_eigen(spec, a, Symmetry::neumann, lambda_lo,
                                                  lambda_hi, opt);
    all.insert(all.end(), n.begin(), n.end());
    std::sort(all.begin(), all.end(), [](const OracleEigenvalue& x, const OracleEigenvalue& y) {
        return x.lambda < y.lambda;
    });
    for (auto& e : all)
        e.discriminant_residual = std::abs(monodromy(spec, a, e.lambda, opt).discriminant - 2.0);
    return all;
}

} // namespace slspec
