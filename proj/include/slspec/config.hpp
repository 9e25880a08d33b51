#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/errors.hpp"
#include "slspec/potential.hpp"

namespace slspec {

/// Run configuration: the potential's cosine coefficients plus grids,
/// thresholds, and the frozen remainder-budget constants. Plain-text
/// `key = value` format, `#` comments, exact decimal parsing, unknown
/// keys rejected.
struct RunConfig {
    std::string name;
    std::vector<double> coefficients; // c0..cN
    std::vector<double> a_grid;
    int p_min = 10;
    int p_max = 40;
    int sweep_p = 30;
    double a0 = std::numeric_limits<double>::quiet_NaN(); // NaN: per-potential default
    double collar_c = kPi;
    double lambda_max = 500.0;
    BudgetConstants budgets{};
    Refinement refinement = Refinement::none;
    std::string out;

    PotentialSpec potential() const {
        if (coefficients.empty())
            throw ConfigError("config: no potential coefficients (c0, c1, ...)");
        return PotentialSpec(coefficients, name);
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view v, const std::string& key) {
    double out;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("config: key '" + key + "' has malformed numeric value '" +
                          std::string(v) + "'");
    if (!std::isfinite(out))
        throw ConfigError("config: key '" + key + "' must be finite");
    return out;
}

inline long parse_int(std::string_view v, const std::string& key) {
    long out;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config: key '" + key + "' has malformed integer value '" +
                          std::string(v) + "'");
    return out;
}

inline std::vector<double> parse_list(std::string_view v, const std::string& key) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t comma = v.find(',', start);
        if (comma == std::string_view::npos) comma = v.size();
        const std::string_view item = trim(v.substr(start, comma - start));
        if (item.empty())
            throw ConfigError("config: key '" + key + "' has an empty list entry");
        out.push_back(parse_double(item, key));
        start = comma + 1;
        if (comma == v.size()) break;
    }
    return out;
}

} // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::map<int, double> c_entries;
    std::string line;
    int line_no = 0;
    bool any_key = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " is not of the form key = value");
        const std::string key{detail::trim(s.substr(0, eq))};
        const std::string_view val = detail::trim(s.substr(eq + 1));
        any_key = true;

        if (key.size() >= 2 && key[0] == 'c' &&
            key.find_first_not_of("0123456789", 1) == std::string::npos) {
            const int n = static_cast<int>(detail::parse_int(key.substr(1), key));
            if (c_entries.count(n))
                throw ConfigError("config: duplicate coefficient key '" + key + "'");
            c_entries[n] = detail::parse_double(val, key);
        } else if (key == "name") {
            cfg.name = std::string(val);
        } else if (key == "a_grid") {
            cfg.a_grid = detail::parse_list(val, key);
        } else if (key == "p_min") {
            cfg.p_min = static_cast<int>(detail::parse_int(val, key));
        } else if (key == "p_max") {
            cfg.p_max = static_cast<int>(detail::parse_int(val, key));
        } else if (key == "sweep_p") {
            cfg.sweep_p = static_cast<int>(detail::parse_int(val, key));
        } else if (key == "a0") {
            cfg.a0 = detail::parse_double(val, key);
        } else if (key == "collar_c") {
            cfg.collar_c = detail::parse_double(val, key);
        } else if (key == "lambda_max") {
            cfg.lambda_max = detail::parse_double(val, key);
        } else if (key == "budget_c_indef") {
            cfg.budgets.c_indef = detail::parse_double(val, key);
        } else if (key == "budget_c_def") {
            cfg.budgets.c_def = detail::parse_double(val, key);
        } else if (key == "budget_c_lemma") {
            cfg.budgets.c_lemma = detail::parse_double(val, key);
        } else if (key == "budget_c_gap") {
            cfg.budgets.c_gap = detail::parse_double(val, key);
        } else if (key == "refine") {
            if (val == "none") cfg.refinement = Refinement::none;
            else if (val == "fixed_point") cfg.refinement = Refinement::fixed_point;
            else throw ConfigError("config: refine must be 'none' or 'fixed_point'");
        } else if (key == "out") {
            cfg.out = std::string(val);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (!any_key) throw ConfigError("config: empty configuration");

    if (!c_entries.empty()) {
        const int top = c_entries.rbegin()->first;
        cfg.coefficients.assign(top + 1, 0.0);
        for (auto [n, v] : c_entries) cfg.coefficients[n] = v;
        if (!c_entries.count(0))
            throw ConfigError("config: coefficient list must start at c0");
    }
    if (cfg.p_min < 1 || cfg.p_max < cfg.p_min)
        throw ConfigError("config: need 1 <= p_min <= p_max");
    if (!(cfg.lambda_max > 0.0))
        throw ConfigError("config: lambda_max must be positive");
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

} // namespace slspec
