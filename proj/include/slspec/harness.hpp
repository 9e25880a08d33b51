#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/config.hpp"
#include "slspec/csv.hpp"
#include "slspec/oracle.hpp"

namespace slspec {

/// Joined asymptotic-vs-oracle record, one per (a, p, sign).
struct ComparisonRow {
    double a = 0.0;
    int p = 0;
    BranchSign sign = BranchSign::minus;
    FineRegion region = FineRegion::A3;
    double lambda_asym = 0.0;
    double lambda_oracle = std::numeric_limits<double>::quiet_NaN();
    double residual_scaled = std::numeric_limits<double>::quiet_NaN(); // |diff| * F(a)
    double budget = 0.0; // remainder bound, lambda units
    double b2 = 0.0;
    int nodes_full = 0;
    double gap_observed = std::numeric_limits<double>::quiet_NaN();
    double gap_predicted = std::numeric_limits<double>::quiet_NaN();
};

struct CompareResult {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> warnings;
};

namespace detail {

struct SymmetryIndex {
    std::map<int, OracleEigenvalue> by_nodes; // nodes_full -> eigenvalue
};

inline SymmetryIndex index_by_nodes(const std::vector<OracleEigenvalue>& eigs,
                                    std::vector<std::string>& warnings) {
    SymmetryIndex idx;
    for (const auto& e : eigs) {
        if (!idx.by_nodes.emplace(e.nodes_full, e).second)
            warnings.push_back("duplicate oracle eigenvalue with " +
                               std::to_string(e.nodes_full) + " nodes near lambda = " +
                               format_g17(e.lambda));
    }
    return idx;
}

inline OracleOptions oracle_options(const RunConfig& cfg) {
    OracleOptions opt;
    opt.ode.lambda_max = cfg.lambda_max;
    return opt;
}

} // namespace detail

/// Compare asymptotic branches against the shooting oracle on the
/// config's (a_grid) x (p_min..p_max) x (sign) lattice. Matching is by
/// node count and symmetry class (D pairs with the minus branch, N with
/// plus), never by eigenvalue proximity, so the nearly degenerate pairs
/// below the transition cannot cross-match. Rows come out sorted by
/// (a, p, sign) with the minus row first.
inline CompareResult compare(const RunConfig& cfg) {
    PotentialSpec spec = cfg.potential();
    if (!spec.min_at_origin()) spec = spec.reflected();
    const ClassGReport rep = validate_class_g(spec);
    if (!rep.pass()) throw ConfigError("compare: potential fails admissibility validation");
    if (cfg.a_grid.empty()) throw ConfigError("compare: a_grid is empty");

    CompareResult res;
    const OracleOptions opt = detail::oracle_options(cfg);
    const double a0 = std::isnan(cfg.a0) ? default_a0(spec) : cfg.a0;

    for (double a : cfg.a_grid) {
        const WellGeometry geom = well_geometry(spec, a, a0);
        const double margin = (0.5 * kPi + 0.2) / geom.F;
        const double lo = std::max(1e-3, 2.0 * kPi * cfg.p_min / geom.F - margin);
        const double hi = 2.0 * kPi * (cfg.p_max + 1) / geom.F + margin;
        if (hi > cfg.lambda_max)
            throw ConfigError("compare: window exceeds lambda_max at a = " + format_g17(a));

        const auto d_idx = detail::index_by_nodes(
            shoot_eigen(spec, a, Symmetry::dirichlet, lo, hi, opt), res.warnings);
        const auto n_idx = detail::index_by_nodes(
            shoot_eigen(spec, a, Symmetry::neumann, lo, hi, opt), res.warnings);

        for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
            for (BranchSign sign : {BranchSign::minus, BranchSign::plus}) {
                const BranchEigenvalue be =
                    branch_lambda(spec, geom, p, sign, cfg.refinement, cfg.budgets, cfg.p_min);
                ComparisonRow row;
                row.a = a;
                row.p = p;
                row.sign = sign;
                row.region = classify_region(spec, geom, be.lambda0, a0);
                row.lambda_asym = be.lambda;
                row.budget = be.remainder_budget;
                row.b2 = be.b2_used;
                row.gap_predicted = gap_width(spec, geom, be.lambda0);

                const auto& idx = (sign == BranchSign::minus) ? d_idx : n_idx;
                const auto it = idx.by_nodes.find(2 * p);
                if (it == idx.by_nodes.end()) {
                    res.warnings.push_back(
                        "unmatched eigenvalue: no " +
                        std::string(sign == BranchSign::minus ? "D" : "N") +
                        " oracle entry with " + std::to_string(2 * p) +
                        " nodes at a = " + format_g17(a));
                } else {
                    row.lambda_oracle = it->second.lambda;
                    row.nodes_full = it->second.nodes_full;
                    row.residual_scaled = std::abs(row.lambda_oracle - row.lambda_asym) * geom.F;
                }
                if (sign == BranchSign::plus) {
                    const auto next_d = d_idx.by_nodes.find(2 * (p + 1));
                    const auto this_n = n_idx.by_nodes.find(2 * p);
                    if (next_d != d_idx.by_nodes.end() && this_n != n_idx.by_nodes.end())
                        row.gap_observed = next_d->second.lambda - this_n->second.lambda;
                }
                res.rows.push_back(row);
            }
        }
    }
    return res;
}

/// Fixed-p sweep of the a-grid across the transition a = a2: one row per
/// (a, sign), demonstrating the continuity of lambda_{+-}(a, p) through
/// the sign change of b2.
inline CompareResult sweep_transition(const RunConfig& cfg) {
    PotentialSpec spec = cfg.potential();
    if (!spec.min_at_origin()) spec = spec.reflected();
    const ClassGReport rep = validate_class_g(spec);
    if (!rep.pass()) throw ConfigError("sweep: potential fails admissibility validation");
    if (cfg.a_grid.empty()) throw ConfigError("sweep: a_grid is empty");
    const double a_min = *std::min_element(cfg.a_grid.begin(), cfg.a_grid.end());
    const double a_max = *std::max_element(cfg.a_grid.begin(), cfg.a_grid.end());
    if (!(a_min > 0.0 && a_max < spec.a1()))
        throw ConfigError("sweep: a_grid must lie inside (0, a1)");
    if (!(a_min <= spec.a2() && spec.a2() <= a_max))
        throw ConfigError("sweep: a_grid must cross a2");

    CompareResult res;
    const OracleOptions opt = detail::oracle_options(cfg);
    const double a0 = std::isnan(cfg.a0) ? default_a0(spec) : cfg.a0;
    const int p = cfg.sweep_p;

    for (double a : cfg.a_grid) {
        const WellGeometry geom = well_geometry(spec, a, a0);
        const double lam0 = 2.0 * kPi * p / geom.F;
        const double margin = (0.5 * kPi + 0.3) / geom.F;
        if (lam0 + margin > cfg.lambda_max)
            throw ConfigError("sweep: window exceeds lambda_max at a = " + format_g17(a));

        const auto d_idx = detail::index_by_nodes(
            shoot_eigen(spec, a, Symmetry::dirichlet, lam0 - margin, lam0 + margin, opt),
            res.warnings);
        const auto n_idx = detail::index_by_nodes(
            shoot_eigen(spec, a, Symmetry::neumann, lam0 - margin, lam0 + margin, opt),
            res.warnings);

        for (BranchSign sign : {BranchSign::minus, BranchSign::plus}) {
            const BranchEigenvalue be =
                branch_lambda(spec, geom, p, sign, cfg.refinement, cfg.budgets, cfg.p_min);
            ComparisonRow row;
            row.a = a;
            row.p = p;
            row.sign = sign;
            row.region = classify_region(spec, geom, be.lambda0, a0);
            row.lambda_asym = be.lambda;
            row.budget = be.remainder_budget;
            row.b2 = be.b2_used;
            row.gap_predicted = gap_width(spec, geom, be.lambda0);
            const auto& idx = (sign == BranchSign::minus) ? d_idx : n_idx;
            const auto it = idx.by_nodes.find(2 * p);
            if (it == idx.by_nodes.end()) {
                res.warnings.push_back("unmatched eigenvalue in sweep at a = " + format_g17(a));
            } else {
                row.lambda_oracle = it->second.lambda;
                row.nodes_full = it->second.nodes_full;
                row.residual_scaled = std::abs(row.lambda_oracle - row.lambda_asym) * geom.F;
            }
            res.rows.push_back(row);
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// CSV emission. One fixed header per subcommand; numbers at 17 significant
// digits; decimal point, comma separator.
// ---------------------------------------------------------------------------

inline void write_compare_csv(std::ostream& os, const CompareResult& res,
                              const std::string& subcommand, bool with_timestamp) {
    if (with_timestamp) write_timestamp_comment(os, subcommand);
    os << "a,p,sign,region,lambda_asym,lambda_oracle,residual_scaled,budget,b2,"
          "nodes_full,gap_observed,gap_predicted\n";
    for (const auto& r : res.rows) {
        os << format_g17(r.a) << ',' << r.p << ',' << to_char(r.sign) << ','
           << to_string(r.region) << ',' << format_g17(r.lambda_asym) << ','
           << format_g17(r.lambda_oracle) << ',' << format_g17(r.residual_scaled) << ','
           << format_g17(r.budget) << ',' << format_g17(r.b2) << ',' << r.nodes_full << ','
           << format_g17(r.gap_observed) << ',' << format_g17(r.gap_predicted) << '\n';
    }
}

struct GeometryRow {
    double a = 0.0;
    std::string region;
    double x2 = 0.0, alpha_sq = 0.0, alpha2_sq = 0.0, F = 0.0, zeta2 = 0.0;
};

inline GeometryRow geometry_row(const PotentialSpec& spec, double a,
                                std::optional<double> lambda, double a0) {
    const WellGeometry g = well_geometry(spec, a, a0);
    GeometryRow row{a, "", g.x2, g.alpha_sq, g.alpha2_sq, g.F, g.zeta2};
    row.region = lambda ? to_string(classify_region(spec, g, *lambda, a0))
                        : to_string(g.region.coarse);
    return row;
}

inline void write_geometry_csv(std::ostream& os, const std::vector<GeometryRow>& rows,
                               bool with_timestamp) {
    if (with_timestamp) write_timestamp_comment(os, "geometry");
    os << "a,region,x2,alpha_sq,alpha2_sq,F,zeta2\n";
    for (const auto& r : rows) {
        os << format_g17(r.a) << ',' << r.region << ',' << format_g17(r.x2) << ','
           << format_g17(r.alpha_sq) << ',' << format_g17(r.alpha2_sq) << ','
           << format_g17(r.F) << ',' << format_g17(r.zeta2) << '\n';
    }
}

inline void write_hfun_csv(std::ostream& os, double x_min, double x_max, double step,
                           bool with_timestamp) {
    if (with_timestamp) write_timestamp_comment(os, "hfun");
    os << "x,H_plus,H_minus,arg_gamma\n";
    if (!(step > 0.0)) throw ConfigError("hfun: step must be positive");
    const long n = std::lround(std::floor((x_max - x_min) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double x = x_min + i * step;
        const specfun::HEvaluation he = specfun::h_pm(x);
        os << format_g17(x) << ',' << format_g17(he.h_plus) << ',' << format_g17(he.h_minus)
           << ',' << format_g17(specfun::arg_gamma(x)) << '\n';
    }
}

struct SpectrumRow {
    int p = 0;
    BranchSign sign = BranchSign::minus;
    double lambda0 = 0.0, lambda = 0.0, b2 = 0.0, gap_pred = 0.0;
    FineRegion region = FineRegion::A3;
};

inline std::vector<SpectrumRow> spectrum_rows(const PotentialSpec& spec, double a, int p_min,
                                              int p_max, Refinement refinement,
                                              const BudgetConstants& bc, double a0) {
    std::vector<SpectrumRow> rows;
    const WellGeometry geom = well_geometry(spec, a, a0);
    for (int p = p_min; p <= p_max; ++p) {
        for (BranchSign sign : {BranchSign::minus, BranchSign::plus}) {
            const BranchEigenvalue be = branch_lambda(spec, geom, p, sign, refinement, bc, p_min);
            rows.push_back({p, sign, be.lambda0, be.lambda, be.b2_used,
                            gap_width(spec, geom, be.lambda0),
                            classify_region(spec, geom, be.lambda0, a0)});
        }
    }
    return rows;
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows,
                               bool with_timestamp) {
    if (with_timestamp) write_timestamp_comment(os, "spectrum");
    os << "p,sign,lambda0,lambda,b2,gap_pred,region\n";
    for (const auto& r : rows) {
        os << r.p << ',' << to_char(r.sign) << ',' << format_g17(r.lambda0) << ','
           << format_g17(r.lambda) << ',' << format_g17(r.b2) << ',' << format_g17(r.gap_pred)
           << ',' << to_string(r.region) << '\n';
    }
}

inline void write_oracle_csv(std::ostream& os, const std::vector<OracleEigenvalue>& eigs,
                             bool with_timestamp) {
    if (with_timestamp) write_timestamp_comment(os, "oracle");
    os << "lambda,symmetry,nodes_half,nodes_full,discriminant_residual\n";
    for (const auto& e : eigs) {
        os << format_g17(e.lambda) << ',' << to_string(e.symmetry) << ',' << e.nodes_half << ','
           << e.nodes_full << ',' << format_g17(e.discriminant_residual) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Self test: every module's invariant suite at reduced size. Failures are
// the return value, not exceptions.
// ---------------------------------------------------------------------------

struct SelftestOptions {
    double arg_gamma_bias = 0.0; // fault-injection hook for the identity suite
};

struct SelftestReport {
    int passed = 0;
    int failed = 0;
    std::vector<std::string> lines;
    bool ok() const { return failed == 0; }
};

namespace detail {

class SelftestRecorder {
public:
    explicit SelftestRecorder(SelftestReport& rep) : rep_(rep) {}
    void check(const std::string& name, bool pass, const std::string& detail = "") {
        rep_.lines.push_back(std::string(pass ? "[ok]   " : "[FAIL] ") + name +
                             (detail.empty() || pass ? "" : " — " + detail));
        (pass ? rep_.passed : rep_.failed)++;
    }

private:
    SelftestReport& rep_;
};

} // namespace detail

inline SelftestReport selftest(const SelftestOptions& opts = {}) {
    SelftestReport rep;
    detail::SelftestRecorder rec(rep);
    const PotentialSpec spec = PotentialSpec::canonical();

    // potential invariants
    {
        bool even_ok = true, deriv_ok = true;
        for (int i = 0; i <= 1000 && (even_ok || deriv_ok); ++i) {
            const double x = -kPi + 2.0 * kPi * i / 1000;
            if (std::abs(spec.g(x) - spec.g(-x)) > 1e-12) even_ok = false;
            if (std::abs(x) <= kPi && std::abs(spec.h(x) - spec.h(-std::abs(x))) > 1e-12)
                even_ok = false;
        }
        const double fd_h = 1e-5;
        for (int k = 0; k <= 4 && deriv_ok; ++k) {
            for (double x : {0.4, 0.9, 1.5, 2.2, 2.8}) {
                const double fd = (spec.g(x + fd_h, k) - spec.g(x - fd_h, k)) / (2.0 * fd_h);
                const double an = spec.g(x, k + 1);
                if (std::abs(fd - an) > 1e-6 * std::max(1.0, std::abs(an))) deriv_ok = false;
            }
        }
        rec.check("potential: evenness of g and h", even_ok);
        rec.check("potential: termwise derivative consistency", deriv_ok);
        rec.check("potential: canonical admissibility", validate_class_g(spec).pass());
        const auto reflected = validate_class_g(PotentialSpec({2.0, 1.0}));
        rec.check("potential: reflected input reindexed and admissible",
                  reflected.pass() && reflected.origin_reindexed);
        rec.check("potential: double-well rejected",
                  !validate_class_g(PotentialSpec({2.0, 0.0, -1.0})).pass());
    }

    // interpolation-function identities (fault-injection hook applies here)
    {
        auto H_biased = [&](double x, int sgn) {
            const double xl = (x == 0.0) ? 0.0 : x * std::log(std::abs(x));
            return sgn * specfun::arctan_exp(kPi * x) - x + xl -
                   (specfun::arg_gamma(x) + opts.arg_gamma_bias);
        };
        std::mt19937_64 rng(20260810u);
        std::uniform_real_distribution<double> ux(-20.0, 20.0);
        bool id_a = true, id_b = true;
        for (int i = 0; i < 300; ++i) {
            const double x = ux(rng);
            if (std::abs(H_biased(x, +1) - H_biased(x, -1) -
                         2.0 * specfun::arctan_exp(kPi * x)) > 1e-12)
                id_a = false;
            if (std::abs(H_biased(-x, +1) - (0.5 * kPi - H_biased(x, +1))) > 1e-12 ||
                std::abs(H_biased(-x, -1) - (-0.5 * kPi - H_biased(x, -1))) > 1e-12)
                id_b = false;
        }
        rec.check("specfun: difference identity H+ = H- + 2 arctan e^{pi x}", id_a);
        rec.check("specfun: reflection identity H(-x) = +-pi/2 - H(x)", id_b);
        const auto mp = specfun::h_minimum(+1);
        const auto mm = specfun::h_minimum(-1);
        rec.check("specfun: H+ minimum near 0.0293",
                  std::abs(mp.x_star - 0.0293) < 2e-3 && std::abs(mp.h_star - (kPi / 4 - 0.0293)) < 2e-3);
        rec.check("specfun: H- minimum near 1.683", std::abs(mm.x_star - 1.683) < 2e-3);
        bool stirling_ok = true;
        for (double x : {10.0, 20.0, 50.0}) {
            const double st = x * std::log(x) - x + 1.0 / (24 * x) + 7.0 / (2880 * x * x * x);
            if (std::abs(specfun::arg_gamma(x) - st) > 1e-8) stirling_ok = false;
        }
        rec.check("specfun: Stirling-form agreement at x = 10, 20, 50", stirling_ok);
    }

    // actions closed forms
    {
        const double f1 = action_F(spec, 1.0);
        const double f2 = action_F(spec, 2.0);
        const double beta = std::sqrt(kPi) * std::exp(std::lgamma(0.75) - std::lgamma(1.25));
        rec.check("actions: F(1) = 4 sqrt 2", std::abs(f1 - 4.0 * std::sqrt(2.0)) < 1e-9);
        rec.check("actions: F(2) matches the Beta closed form", std::abs(f2 - beta) < 1e-9);
        bool monotone = true;
        double prev = action_F(spec, 0.0);
        for (int i = 1; i < 20; ++i) {
            const double F = action_F(spec, 2.9 * i / 20.0);
            if (F >= prev) monotone = false;
            prev = F;
        }
        rec.check("actions: F strictly decreasing", monotone);
        rec.check("actions: zeta2 at coalescence = 2^{5/4}",
                  std::abs(zeta2(spec, 1.0) - std::pow(2.0, 1.25)) < 1e-9);
        bool k_ok = std::abs(connection_k(0.0) - (std::sqrt(2.0) - 1.0)) < 1e-14;
        for (double b = -5.0; b <= 5.0; b += 0.25) {
            const double k = connection_k(b);
            if (!(k > 0.0 && k < 1.0)) k_ok = false;
            if (std::abs(std::acos(2 * k / (1 + k * k)) - specfun::arctan_exp(kPi * b)) > 1e-12)
                k_ok = false;
        }
        rec.check("actions: k(b) range and arccos identity", k_ok);
    }

    // asymptotic structure
    {
        const WellGeometry g2 = well_geometry(spec, 2.0);
        const auto lp = branch_lambda(spec, g2, 10, BranchSign::plus);
        const auto lm = branch_lambda(spec, g2, 10, BranchSign::minus);
        const double sep = 2.0 * specfun::arctan_exp(kPi * lp.b2_used) / g2.F;
        rec.check("asymptotics: branch separation identity",
                  std::abs((lp.lambda - lm.lambda) - sep) < 1e-12);
        const WellGeometry g05 = well_geometry(spec, 0.5);
        rec.check("asymptotics: gap limits",
                  std::abs(gap_width(spec, g05, 200.0) - 2.0 * kPi / g05.F) < 1e-3 &&
                      std::abs(gap_width(spec, g2, 200.0) - kPi / g2.F) < 1e-3);
        bool order_ok = order_map(20, 2.0, 1.0, 50.0).sign == BranchSign::plus &&
                        order_map(21, 2.0, 1.0, 50.0).sign == BranchSign::minus &&
                        !order_map(20, 0.5, 1.0, 50.0).sign.has_value();
        try {
            order_map(20, 1.0 + 1e-6, 1.0, 50.0);
            order_ok = false;
        } catch (const AmbiguousOrderError&) {
        }
        rec.check("asymptotics: ordering map and collar", order_ok);
        const double lam0 = lambda0(g05, 12);
        const double res = lemma_residual(spec, g05, lam0, 12, BranchSign::plus);
        const double b = -0.5 * lam0 * g05.alpha_sq;
        rec.check("asymptotics: leftover WKB correction at lambda0",
                  std::abs(res - 1.0 / (24.0 * b)) < 1e-10);
    }

    // oracle integrity
    {
        IntegrationOptions iopt;
        OscState y{1.0, 0.0};
        integrate_scaled([](double) { return 1.0; }, 3.0, y, 0.0, kPi, iopt,
                         [](double, const OscState&) {});
        rec.check("oracle: constant-coefficient closed form",
                  std::abs(y[0] - std::cos(3.0 * kPi)) < 1e-10 &&
                      std::abs(3.0 * y[1] + 3.0 * std::sin(3.0 * kPi)) < 1e-10);
        const MonodromyRecord m = monodromy(spec, 2.0, 30.0);
        rec.check("oracle: unit Wronskian", m.wronskian_error <= 1e-9);
        OscState fwd{0.3, 0.7};
        auto r = [&](double x) { return spec.g(x) - 0.5; };
        integrate_scaled(r, 20.0, fwd, 0.0, kPi, iopt, [](double, const OscState&) {});
        integrate_scaled(r, 20.0, fwd, kPi, 0.0, iopt, [](double, const OscState&) {});
        rec.check("oracle: reversal returns initial data",
                  std::abs(fwd[0] - 0.3) < 1e-9 && std::abs(fwd[1] - 0.7) < 1e-9);
    }

    // reduced comparison run
    {
        RunConfig cfg;
        cfg.coefficients = {2.0, -1.0};
        cfg.a_grid = {2.0};
        cfg.p_min = 10;
        cfg.p_max = 12;
        bool within = true, nodes_ok = true, matched = true;
        try {
            const CompareResult cr = compare(cfg);
            for (const auto& row : cr.rows) {
                if (std::isnan(row.lambda_oracle)) { matched = false; continue; }
                if (row.residual_scaled > row.budget * action_F(spec, row.a)) within = false;
                if (row.nodes_full != 2 * row.p) nodes_ok = false;
            }
            matched = matched && !cr.rows.empty();
        } catch (const std::exception&) {
            matched = within = nodes_ok = false;
        }
        rec.check("harness: oracle matches asymptotics within budget (a = 2, p = 10..12)",
                  matched && within);
        rec.check("harness: node law nodes_full = 2p", nodes_ok);
    }

    // determinism
    {
        RunConfig cfg;
        cfg.coefficients = {2.0, -1.0};
        cfg.a_grid = {0.9, 1.0, 1.1};
        cfg.sweep_p = 10;
        cfg.p_min = 5;
        std::ostringstream s1, s2;
        write_compare_csv(s1, sweep_transition(cfg), "sweep", false);
        write_compare_csv(s2, sweep_transition(cfg), "sweep", false);
        rec.check("harness: identical configs give byte-identical CSV", s1.str() == s2.str());
    }

    return rep;
}

} // namespace slspec
