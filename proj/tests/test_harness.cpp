#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "slspec/harness.hpp"

using namespace slspec;

TEST_CASE("config parsing") {
    SECTION("round trip with exact decimals") {
        std::istringstream in(
            "# comment\n"
            "name = demo\n"
            "c0 = 2.0\n"
            "c1 = -0.1\n"
            "a_grid = 0.5, 1.0, 2.0\n"
            "p_min = 10\n"
            "p_max = 12\n"
            "lambda_max = 120.5\n"
            "budget_c_indef = 0.25\n"
            "refine = fixed_point\n"
            "out = result.csv\n");
        const RunConfig cfg = parse_config(in);
        CHECK(cfg.name == "demo");
        CHECK(cfg.coefficients == std::vector<double>{2.0, -0.1});
        CHECK(cfg.coefficients[1] == -0.1); // correctly rounded decimal
        CHECK(cfg.a_grid == std::vector<double>{0.5, 1.0, 2.0});
        CHECK(cfg.p_min == 10);
        CHECK(cfg.p_max == 12);
        CHECK(cfg.lambda_max == 120.5);
        CHECK(cfg.budgets.c_indef == 0.25);
        CHECK(cfg.refinement == Refinement::fixed_point);
        CHECK(cfg.out == "result.csv");
    }
    SECTION("rejections") {
        std::istringstream unknown("c0 = 2\nwhatever = 3\n");
        CHECK_THROWS_AS(parse_config(unknown), ConfigError);
        std::istringstream empty("");
        CHECK_THROWS_AS(parse_config(empty), ConfigError);
        std::istringstream junk("c0 = 2.0abc\n");
        CHECK_THROWS_AS(parse_config(junk), ConfigError);
        std::istringstream nan_val("c0 = nan\n");
        CHECK_THROWS_AS(parse_config(nan_val), ConfigError);
        std::istringstream no_c0("c1 = -1\n");
        CHECK_THROWS_AS(parse_config(no_c0).potential(), ConfigError);
        std::istringstream dup("c0 = 1\nc0 = 2\n");
        CHECK_THROWS_AS(parse_config(dup), ConfigError);
        std::istringstream bad_p("c0 = 2\np_min = 9\np_max = 3\n");
        CHECK_THROWS_AS(parse_config(bad_p), ConfigError);
    }
}

TEST_CASE("csv formatting") {
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(std::nan("")) == "nan");
    // value -> text -> value is exact at 17 significant digits
    const double v = 26.874393260550892;
    CHECK(std::strtod(format_g17(v).c_str(), nullptr) == v);
}

namespace {
RunConfig mini_config() {
    RunConfig cfg;
    cfg.coefficients = {2.0, -1.0};
    cfg.a_grid = {2.0};
    cfg.p_min = 10;
    cfg.p_max = 12;
    return cfg;
}
} // namespace

TEST_CASE("compare joins asymptotics with the oracle") {
    const CompareResult res = compare(mini_config());
    REQUIRE(res.rows.size() == 6); // 3 p-values x 2 signs
    CHECK(res.warnings.empty());

    const PotentialSpec spec = PotentialSpec::canonical();
    const double F = action_F(spec, 2.0);
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        CHECK(r.a == 2.0);
        CHECK(r.p == 10 + static_cast<int>(i) / 2);
        CHECK(r.sign == (i % 2 == 0 ? BranchSign::minus : BranchSign::plus));
        CHECK(r.region == FineRegion::A2);
        CHECK(r.nodes_full == 2 * r.p);
        CHECK(std::isfinite(r.lambda_oracle));
        CHECK(r.residual_scaled >= 0.0);
        CHECK(r.budget >= 0.0);
        CHECK(r.residual_scaled <= r.budget * F);
        CHECK(r.b2 > 0.0);
    }
    // observed gap agrees with the prediction to leading order
    for (const auto& r : res.rows) {
        if (r.sign == BranchSign::plus && std::isfinite(r.gap_observed))
            CHECK(std::abs(r.gap_observed - r.gap_predicted) <=
                  0.05 * r.gap_predicted);
    }
}

TEST_CASE("compare handles the degenerate side") {
    RunConfig cfg = mini_config();
    cfg.a_grid = {0.5};
    cfg.p_min = 12;
    cfg.p_max = 13;
    const CompareResult res = compare(cfg);
    REQUIRE(res.rows.size() == 4);
    for (const auto& r : res.rows) {
        CHECK(std::isfinite(r.lambda_oracle));
        CHECK(r.nodes_full == 2 * r.p);
        // second remainder branch, lambda units
        CHECK(std::abs(r.lambda_oracle - r.lambda_asym) <= r.budget);
    }
    // the pair is nearly degenerate but never cross-matched
    const auto& d12 = res.rows[0];
    const auto& n12 = res.rows[1];
    CHECK(d12.sign == BranchSign::minus);
    CHECK(n12.sign == BranchSign::plus);
    CHECK(std::abs(n12.lambda_oracle - d12.lambda_oracle) < 1e-5);
}

TEST_CASE("compare rejects bad configurations") {
    RunConfig cfg = mini_config();
    cfg.a_grid.clear();
    CHECK_THROWS_AS(compare(cfg), ConfigError);

    RunConfig tight = mini_config();
    tight.lambda_max = 20.0; // window for p <= 12 ends above this
    CHECK_THROWS_AS(compare(tight), ConfigError);

    RunConfig bad_potential = mini_config();
    bad_potential.coefficients = {2.0, 0.0, -1.0}; // two wells
    CHECK_THROWS_AS(compare(bad_potential), ConfigError);
}

TEST_CASE("sweep crosses the transition") {
    RunConfig cfg;
    cfg.coefficients = {2.0, -1.0};
    cfg.a_grid = {0.9, 1.0, 1.1};
    cfg.sweep_p = 12;
    cfg.p_min = 5;
    const CompareResult res = sweep_transition(cfg);
    REQUIRE(res.rows.size() == 6);
    for (const auto& r : res.rows) CHECK(std::isfinite(r.lambda_oracle));

    const auto& at_a2_minus = res.rows[2];
    const auto& at_a2_plus = res.rows[3];
    CHECK(at_a2_minus.b2 == 0.0);
    CHECK(at_a2_plus.b2 == 0.0);
    // D/N offset at the transition is (pi/2)/F up to the remainder
    const double F = action_F(PotentialSpec::canonical(), 1.0);
    const double offset = at_a2_plus.lambda_oracle - at_a2_minus.lambda_oracle;
    CHECK(std::abs(offset - 0.5 * kPi / F) <= 2.0 * at_a2_plus.budget);

    RunConfig off_grid = cfg;
    off_grid.a_grid = {1.2, 1.4};
    CHECK_THROWS_AS(sweep_transition(off_grid), ConfigError);
}

TEST_CASE("deterministic emission") {
    RunConfig cfg = mini_config();
    cfg.p_max = 11;
    std::ostringstream s1, s2;
    write_compare_csv(s1, compare(cfg), "compare", false);
    write_compare_csv(s2, compare(cfg), "compare", false);
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("a,p,sign,region,lambda_asym,lambda_oracle,residual_scaled,"
                         "budget,b2,nodes_full,gap_observed,gap_predicted\n", 0) == 0);
    // timestamped variant differs only in the comment line
    std::ostringstream s3;
    write_compare_csv(s3, compare(cfg), "compare", true);
    const std::string with_ts = s3.str();
    CHECK(with_ts.rfind("# slspec compare ", 0) == 0);
    CHECK(with_ts.substr(with_ts.find('\n') + 1) == s1.str());
}

TEST_CASE("selftest passes clean and detects an injected bias") {
    const SelftestReport clean = selftest();
    for (const auto& line : clean.lines) INFO(line);
    CHECK(clean.ok());
    CHECK(clean.passed >= 20);

    const SelftestReport biased = selftest({1e-3});
    CHECK_FALSE(biased.ok());
    bool reflection_failed = false;
    for (const auto& line : biased.lines)
        if (line.find("[FAIL]") == 0 && line.find("reflection identity") != std::string::npos)
            reflection_failed = true;
    CHECK(reflection_failed);
}
