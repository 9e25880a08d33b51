#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slspec/errors.hpp"
#include "slspec/roots.hpp"

namespace slspec {

/// Even 2*pi-periodic potential given as a finite cosine series
///     g(x) = sum_n c_n cos(n x),
/// in canonical orientation: minimum a2 = g(0), maximum a1 = g(pi).
/// The analytic continuation h(x) = g(ix) = sum_n c_n cosh(n x) drives the
/// barrier geometry once the parameter drops below a2. Immutable after
/// construction; safe for concurrent reads.
class PotentialSpec {
public:
    explicit PotentialSpec(std::vector<double> cosine_coeffs, std::string name = "")
        : c_(std::move(cosine_coeffs)), name_(std::move(name)) {
        if (c_.empty())
            throw std::invalid_argument("PotentialSpec: no coefficients");
        for (double v : c_)
            if (!std::isfinite(v))
                throw std::invalid_argument("PotentialSpec: non-finite coefficient");
        while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
        double at0 = 0.0, atpi = 0.0;
        for (std::size_t n = 0; n < c_.size(); ++n) {
            at0 += c_[n];
            atpi += (n % 2 == 0) ? c_[n] : -c_[n];
        }
        a2_ = at0;
        a1_ = atpi;
    }

    /// The project-wide test potential g(x) = 2 - cos x (a2 = 1, a1 = 3).
    static PotentialSpec canonical() { return PotentialSpec({2.0, -1.0}, "canonical"); }

    /// d^k g / dx^k at x by termwise differentiation, k = 0..6.
    double g(double x, int derivative_order = 0) const {
        if (derivative_order < 0 || derivative_order > 6)
            throw std::domain_error("PotentialSpec::g: derivative order outside 0..6");
        double s = 0.0;
        for (std::size_t n = 0; n < c_.size(); ++n) {
            const double nd = static_cast<double>(n);
            double scale = 1.0;
            for (int k = 0; k < derivative_order; ++k) scale *= nd;
            // d^k cos(nx) cycles through {cos, -sin, -cos, sin}
            double term;
            switch (derivative_order % 4) {
                case 0: term = std::cos(nd * x); break;
                case 1: term = -std::sin(nd * x); break;
                case 2: term = -std::cos(nd * x); break;
                default: term = std::sin(nd * x); break;
            }
            s += c_[n] * scale * term;
        }
        return s;
    }

    /// Continuation h(x) = sum_n c_n cosh(n x); requires |x| <= pi and
    /// rejects arguments whose cosh(N x) would overflow.
    double h(double x) const {
        check_h_domain(x);
        double s = 0.0;
        for (std::size_t n = 0; n < c_.size(); ++n)
            s += c_[n] * std::cosh(static_cast<double>(n) * x);
        return s;
    }

    double h_prime(double x) const {
        check_h_domain(x);
        double s = 0.0;
        for (std::size_t n = 0; n < c_.size(); ++n)
            s += c_[n] * static_cast<double>(n) * std::sinh(static_cast<double>(n) * x);
        return s;
    }

    double a1() const { return a1_; }
    double a2() const { return a2_; }
    const std::vector<double>& coefficients() const { return c_; }
    const std::string& name() const { return name_; }

    /// Potential shifted by half a period, g(x - pi): c_n -> (-1)^n c_n.
    /// Swaps the roles of minimum and maximum.
    PotentialSpec reflected() const {
        std::vector<double> r(c_);
        for (std::size_t n = 1; n < r.size(); n += 2) r[n] = -r[n];
        return PotentialSpec(std::move(r), name_.empty() ? "" : name_ + "(reflected)");
    }

    bool min_at_origin() const { return a2_ < a1_; }

private:
    void check_h_domain(double x) const {
        constexpr double pi = 3.14159265358979323846;
        if (!(std::abs(x) <= pi + 1e-12))
            throw std::domain_error("PotentialSpec::h: |x| must be <= pi");
        const double top = static_cast<double>(c_.size() - 1) * std::abs(x);
        if (top > 700.0)
            throw std::domain_error("PotentialSpec::h: cosh(N x) would overflow");
    }

    std::vector<double> c_;
    std::string name_;
    double a1_ = 0.0;
    double a2_ = 0.0;
};

/// Verdicts for the four admissibility conditions: bounded derivatives,
/// a single simple minimum/maximum pair, evenness about both extrema, and
/// an admissible continuation h (h(0) = a2, strictly decreasing to a root
/// x0 well inside the period).
struct ClassGReport {
    bool derivatives_bounded = false;   // condition 1
    bool unique_simple_extrema = false; // condition 2 (includes a2 > 0)
    bool even_about_extrema = false;    // condition 3
    bool continuation_admissible = false; // condition 4
    bool origin_reindexed = false; // input had its minimum at pi; checks ran on g(x - pi)
    double a1 = 0.0;
    double a2 = 0.0;
    double x0 = 0.0; // root of h
    std::vector<std::string> notes;

    bool pass() const {
        return derivatives_bounded && unique_simple_extrema &&
               even_about_extrema && continuation_admissible;
    }
};

namespace detail {

inline void note_witness(std::vector<std::string>& notes, const std::string& what, double x) {
    notes.push_back(what + " at x = " + std::to_string(x));
}

} // namespace detail

/// Grid-based admissibility check. Failures are reported with witness
/// points rather than thrown; only non-finite input throws (from the
/// PotentialSpec constructor). grid_size >= 256.
inline ClassGReport validate_class_g(const PotentialSpec& input, int grid_size = 512) {
    if (grid_size < 256)
        throw std::invalid_argument("validate_class_g: grid_size must be >= 256");
    constexpr double pi = 3.14159265358979323846;

    ClassGReport rep;
    PotentialSpec spec = input;
    if (!input.min_at_origin()) {
        spec = input.reflected();
        rep.origin_reindexed = true;
        rep.notes.push_back("minimum found at x = pi; conditions checked on g(x - pi)");
    }
    rep.a1 = spec.a1();
    rep.a2 = spec.a2();

    // (1) six bounded derivatives: termwise differentiation of a finite
    // cosine series is exact, so sampling only guards against blow-ups.
    rep.derivatives_bounded = true;
    for (int k = 0; k <= 6 && rep.derivatives_bounded; ++k) {
        for (int i = 0; i <= grid_size; ++i) {
            const double x = -pi + 2.0 * pi * i / grid_size;
            if (!std::isfinite(spec.g(x, k))) {
                rep.derivatives_bounded = false;
                detail::note_witness(rep.notes, "non-finite derivative order " + std::to_string(k), x);
                break;
            }
        }
    }

    // (2) one simple minimum at 0 and one simple maximum at pi: g' must not
    // vanish inside (0, pi), with the right curvature signs at the ends.
    rep.unique_simple_extrema = true;
    if (!(spec.a2() > 0.0)) {
        rep.unique_simple_extrema = false;
        rep.notes.push_back("a2 = g(0) must be positive, got " + std::to_string(spec.a2()));
    }
    if (!(spec.g(0.0, 2) > 0.0)) {
        rep.unique_simple_extrema = false;
        rep.notes.push_back("g''(0) <= 0: minimum at the origin is not simple");
    }
    if (!(spec.g(pi, 2) < 0.0)) {
        rep.unique_simple_extrema = false;
        rep.notes.push_back("g''(pi) >= 0: maximum at pi is not simple");
    }
    for (int i = 1; i < grid_size; ++i) {
        const double x = pi * i / grid_size;
        const double d = spec.g(x, 1);
        if (d <= 0.0 && x > 1e-9 && x < pi - 1e-9) {
            rep.unique_simple_extrema = false;
            detail::note_witness(rep.notes, "g' not positive on (0, pi)", x);
            break;
        }
    }

    // (3) evenness about both extrema; exact for cosine series, checked
    // numerically anyway.
    rep.even_about_extrema = true;
    for (int i = 0; i <= grid_size; ++i) {
        const double x = pi * i / grid_size;
        if (std::abs(spec.g(x) - spec.g(-x)) > 1e-12 ||
            std::abs(spec.g(pi + x) - spec.g(pi - x)) > 1e-12) {
            rep.even_about_extrema = false;
            detail::note_witness(rep.notes, "evenness violated", x);
            break;
        }
    }

    // (4) continuation h: h(0) = a2, a root x0 <= pi - 0.1, and strict
    // decrease on (0, x0].
    rep.continuation_admissible = true;
    if (std::abs(spec.h(0.0) - spec.a2()) > 1e-12 * std::max(1.0, std::abs(spec.a2()))) {
        rep.continuation_admissible = false;
        rep.notes.push_back("h(0) != a2");
    }
    double x0 = 0.0;
    if (rep.continuation_admissible) {
        if (spec.h(pi - 0.1) > 0.0) {
            rep.continuation_admissible = false;
            rep.notes.push_back("h has no root in (0, pi - 0.1]");
        } else {
            x0 = bisect([&](double x) { return spec.h(x); }, 1e-12, pi - 0.1, 1e-14);
            rep.x0 = x0;
        }
    }
    if (rep.continuation_admissible) {
        for (int i = 1; i <= grid_size; ++i) {
            const double x = x0 * i / grid_size;
            if (!(spec.h_prime(x) < 0.0)) {
                rep.continuation_admissible = false;
                detail::note_witness(rep.notes, "h not strictly decreasing on (0, x0]", x);
                break;
            }
            const double hx = spec.h(x);
            if (hx < -1e-12 || hx > spec.a2() + 1e-12) {
                rep.continuation_admissible = false;
                detail::note_witness(rep.notes, "h outside [0, a2] on [0, x0]", x);
                break;
            }
        }
    }

    // Advisory only: the sufficient coefficient inequality
    // |c1| <= (pi/2) sum_{n>=2} n |c_n| rejects simple admissible series
    // (it fails for 2 - cos x), so it never gates the verdict.
    {
        const auto& c = spec.coefficients();
        double rhs = 0.0;
        for (std::size_t n = 2; n < c.size(); ++n) rhs += static_cast<double>(n) * std::abs(c[n]);
        if (c.size() > 1 && std::abs(c[1]) > 0.5 * pi * rhs)
            rep.notes.push_back("advisory: coefficient inequality |c1| <= (pi/2) sum n|c_n| not met (not gating)");
    }

    return rep;
}

} // namespace slspec
