// Command-line front end: validation, geometry/special-function dumps,
// asymptotic spectra, the shooting oracle, and the comparison harness.
// Every data subcommand emits CSV (17 significant digits) to --out or
// stdout, with an optional timestamp comment as the first line.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slspec/config.hpp"
#include "slspec/harness.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_path;
    bool no_timestamp = false;
};

std::unique_ptr<std::ofstream> out_file;

std::ostream& open_output(const GlobalArgs& g) {
    if (g.out_path.empty()) return std::cout;
    out_file = std::make_unique<std::ofstream>(g.out_path);
    if (!*out_file) throw slspec::ConfigError("cannot open output file '" + g.out_path + "'");
    return *out_file;
}

slspec::RunConfig load_config(const GlobalArgs& g) {
    if (g.config_path.empty())
        throw slspec::ConfigError("this subcommand needs --config PATH");
    slspec::RunConfig cfg = slspec::parse_config_file(g.config_path);
    if (!g.out_path.empty()) cfg.out = g.out_path;
    return cfg;
}

slspec::PotentialSpec canonical_potential(const slspec::RunConfig& cfg) {
    slspec::PotentialSpec spec = cfg.potential();
    return spec.min_at_origin() ? spec : spec.reflected();
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo))
        throw slspec::ConfigError("grid: need min <= max and step > 0");
    std::vector<double> g;
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(lo + i * step);
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic Sturm-Liouville eigenvalue asymptotics across the "
                 "definite/indefinite transition, with a numerical oracle"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "run configuration file");
    app.add_option("--out", g.out_path, "output path (default: stdout)");
    app.add_flag("--no-header-timestamp", g.no_timestamp,
                 "suppress the timestamp comment line (byte-identical reruns)");

    auto* validate = app.add_subcommand("validate", "check potential admissibility");

    auto* geometry = app.add_subcommand("geometry", "dump per-a geometric quantities as CSV");
    double ga_min = 0.1, ga_max = 2.9, ga_step = 0.1;
    std::optional<double> ga_lambda;
    geometry->add_option("--a-min", ga_min, "grid start");
    geometry->add_option("--a-max", ga_max, "grid end");
    geometry->add_option("--step", ga_step, "grid step");
    geometry->add_option("--lambda", ga_lambda, "also resolve the lambda-dependent fine region");

    auto* hfun = app.add_subcommand("hfun", "dump H+-(x) and arg Gamma(1/2+ix) as CSV");
    double hx_min = -5.0, hx_max = 5.0, hx_step = 0.01;
    hfun->add_option("--x-min", hx_min, "grid start");
    hfun->add_option("--x-max", hx_max, "grid end");
    hfun->add_option("--step", hx_step, "grid step");

    auto* spectrum = app.add_subcommand("spectrum", "asymptotic branches at fixed a as CSV");
    double sp_a = 2.0;
    int sp_pmin = 10, sp_pmax = 40;
    bool sp_refine = false;
    spectrum->add_option("--a", sp_a, "parameter value")->required();
    spectrum->add_option("--p-min", sp_pmin, "first branch index");
    spectrum->add_option("--p-max", sp_pmax, "last branch index");
    spectrum->add_flag("--refine", sp_refine, "fixed-point refinement of each branch");

    auto* oracle = app.add_subcommand("oracle", "shooting/monodromy eigenvalues as CSV");
    double or_a = 2.0, or_lo = 0.0, or_hi = 0.0;
    std::string or_sym = "both";
    oracle->add_option("--a", or_a, "parameter value")->required();
    oracle->add_option("--lambda-min", or_lo, "window start")->required();
    oracle->add_option("--lambda-max", or_hi, "window end")->required();
    oracle->add_option("--symmetry", or_sym, "d, n, or both")
        ->check(CLI::IsMember({"d", "n", "both"}));

    auto* compare = app.add_subcommand("compare", "asymptotics vs oracle over the config grid");

    auto* sweep = app.add_subcommand("sweep", "fixed-p sweep of a across the transition");
    std::optional<int> sw_p;
    std::optional<double> sw_amin, sw_amax, sw_astep;
    sweep->add_option("--p", sw_p, "branch index (default: config sweep_p)");
    sweep->add_option("--a-min", sw_amin, "override a-grid start");
    sweep->add_option("--a-max", sw_amax, "override a-grid end");
    sweep->add_option("--step", sw_astep, "override a-grid step");

    auto* selftest = app.add_subcommand("selftest", "run all invariant suites at reduced size");
    double st_bias = 0.0;
    selftest->add_option("--inject-arg-gamma-bias", st_bias,
                         "fault-injection hook: bias arg_gamma inside the identity suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const slspec::RunConfig cfg = load_config(g);
            const slspec::ClassGReport rep = slspec::validate_class_g(cfg.potential());
            std::ostream& os = open_output(g);
            os << "condition 1 (bounded derivatives):   " << (rep.derivatives_bounded ? "pass" : "FAIL") << "\n";
            os << "condition 2 (unique simple extrema): " << (rep.unique_simple_extrema ? "pass" : "FAIL") << "\n";
            os << "condition 3 (evenness):              " << (rep.even_about_extrema ? "pass" : "FAIL") << "\n";
            os << "condition 4 (continuation h):        " << (rep.continuation_admissible ? "pass" : "FAIL") << "\n";
            os << "a1 = " << slspec::format_g17(rep.a1) << ", a2 = " << slspec::format_g17(rep.a2)
               << ", x0 = " << slspec::format_g17(rep.x0) << "\n";
            for (const auto& n : rep.notes) os << "note: " << n << "\n";
            os << (rep.pass() ? "admissible" : "NOT admissible") << "\n";
            return rep.pass() ? 0 : 1;
        }

        if (geometry->parsed()) {
            const slspec::RunConfig cfg = load_config(g);
            const slspec::PotentialSpec spec = canonical_potential(cfg);
            const double a0 = std::isnan(cfg.a0) ? slspec::default_a0(spec) : cfg.a0;
            std::vector<slspec::GeometryRow> rows;
            for (double a : make_grid(ga_min, ga_max, ga_step))
                rows.push_back(slspec::geometry_row(spec, a, ga_lambda, a0));
            slspec::write_geometry_csv(open_output(g), rows, !g.no_timestamp);
            return 0;
        }

        if (hfun->parsed()) {
            slspec::write_hfun_csv(open_output(g), hx_min, hx_max, hx_step, !g.no_timestamp);
            return 0;
        }

        if (spectrum->parsed()) {
            const slspec::RunConfig cfg = load_config(g);
            const slspec::PotentialSpec spec = canonical_potential(cfg);
            const double a0 = std::isnan(cfg.a0) ? slspec::default_a0(spec) : cfg.a0;
            const auto rows = slspec::spectrum_rows(
                spec, sp_a, sp_pmin, sp_pmax,
                sp_refine ? slspec::Refinement::fixed_point : cfg.refinement, cfg.budgets, a0);
            slspec::write_spectrum_csv(open_output(g), rows, !g.no_timestamp);
            return 0;
        }

        if (oracle->parsed()) {
            const slspec::RunConfig cfg = load_config(g);
            const slspec::PotentialSpec spec = canonical_potential(cfg);
            slspec::OracleOptions opt;
            opt.ode.lambda_max = cfg.lambda_max;
            std::vector<slspec::OracleEigenvalue> eigs;
            if (or_sym == "both") {
                eigs = slspec::periodic_spectrum(spec, or_a, or_lo, or_hi, opt);
            } else {
                const auto sym = (or_sym == "d") ? slspec::Symmetry::dirichlet
                                                 : slspec::Symmetry::neumann;
                eigs = slspec::shoot_eigen(spec, or_a, sym, or_lo, or_hi, opt);
                for (auto& e : eigs)
                    e.discriminant_residual =
                        std::abs(slspec::monodromy(spec, or_a, e.lambda, opt).discriminant - 2.0);
            }
            slspec::write_oracle_csv(open_output(g), eigs, !g.no_timestamp);
            return 0;
        }

        if (compare->parsed()) {
            const slspec::RunConfig cfg = load_config(g);
            const slspec::CompareResult res = slspec::compare(cfg);
            std::ostream& os = cfg.out.empty() ? std::cout : *(out_file = std::make_unique<std::ofstream>(cfg.out));
            slspec::write_compare_csv(os, res, "compare", !g.no_timestamp);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            slspec::RunConfig cfg = load_config(g);
            if (sw_p) cfg.sweep_p = *sw_p;
            if (sw_amin && sw_amax && sw_astep)
                cfg.a_grid = make_grid(*sw_amin, *sw_amax, *sw_astep);
            const slspec::CompareResult res = slspec::sweep_transition(cfg);
            std::ostream& os = cfg.out.empty() ? std::cout : *(out_file = std::make_unique<std::ofstream>(cfg.out));
            slspec::write_compare_csv(os, res, "sweep", !g.no_timestamp);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            return 0;
        }

        if (selftest->parsed()) {
            const slspec::SelftestReport rep = slspec::selftest({st_bias});
            std::ostream& os = open_output(g);
            for (const auto& line : rep.lines) os << line << "\n";
            os << rep.passed << " passed, " << rep.failed << " failed\n";
            return rep.ok() ? 0 : 1;
        }
    } catch (const slspec::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
