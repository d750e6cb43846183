#pragma once

// Flat key = value experiment configuration with unit suffixes.
//
//   fc = 28 GHz
//   sigma2 = -90 dBm
//   delta = 0.5 lambda
//   # comments and blank lines are ignored
//
// Powers convert from dBm to W here and nowhere else.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pass/core_model.hpp"
#include "pass/errors.hpp"

namespace pass::harness {

inline const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{"uplink-single", "uplink-multi", "downlink-single",
                                              "downlink-multi", "antenna-sweep"};
    return ids;
}

struct ExperimentConfig {
    // system
    double fc = 28e9;            // Hz
    double n_eff = 1.4;
    double sigma2 = 1e-12;       // W (-90 dBm)
    // geometry, m
    double d = 3.0;
    double y_p = 0.0;
    double dx = 20.0;
    double dy = 4.0;
    std::optional<double> q0;     // default depends on single/multi pinch
    std::optional<double> q_max;
    double q_fixed = 0.0;         // fixed-antenna benchmark position
    // powers, W
    double p1 = 0.01;
    double p2 = 0.01;
    double p_total = 0.01;
    // antennas
    std::size_t n = 4;
    double delta_lambda = 0.5;
    std::optional<double> delta_m;  // explicit spacing in metres wins over delta_lambda
    // grids
    std::optional<std::size_t> grid_points;
    bool full_grid = false;
    std::size_t alpha_points = 201;
    std::size_t rho_points = 101;
    std::size_t split_points = 64;
    std::size_t restarts = 3;
    std::size_t n_max = 400;
    // run
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string experiment = "uplink-single";

    SystemParams params() const { return {fc, n_eff, sigma2}; }
    double delta(const SystemParams& p) const { return delta_m ? *delta_m : delta_lambda * p.lambda(); }
    bool multi_pinch() const { return experiment == "uplink-multi" || experiment == "downlink-multi"; }
    /// Element-wise search grid: explicit Q, else 10^4 for N = 1 or with
    /// full_grid, else 2000.
    std::size_t search_grid() const {
        if (grid_points) return *grid_points;
        return (full_grid || n == 1) ? 10000 : 2000;
    }
    double range_lo() const { return q0 ? *q0 : -dx / 2 - (multi_pinch() ? 1.0 : 0.0); }
    double range_hi() const { return q_max ? *q_max : dx / 2 + (multi_pinch() ? 1.0 : 0.0); }
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Quantity {
    double value;
    std::string unit;
};

inline Quantity parse_quantity(const std::string& key, std::string_view text) {
    const std::string s(text);
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    return {v, std::string(trim(std::string_view(end)))};
}

inline double as_frequency(const std::string& key, const Quantity& q) {
    if (q.unit == "GHz") return q.value * 1e9;
    if (q.unit == "MHz") return q.value * 1e6;
    if (q.unit == "Hz" || q.unit.empty()) return q.value;
    throw ConfigError("key '" + key + "': unknown frequency unit '" + q.unit + "'");
}

inline double as_power(const std::string& key, const Quantity& q) {
    if (q.unit == "dBm") return dbm_to_watt(q.value);
    if (q.unit == "W" || q.unit.empty()) return q.value;
    if (q.unit == "mW") return q.value * 1e-3;
    throw ConfigError("key '" + key + "': unknown power unit '" + q.unit + "'");
}

inline double as_length(const std::string& key, const Quantity& q) {
    if (q.unit == "m" || q.unit.empty()) return q.value;
    if (q.unit == "cm") return q.value * 1e-2;
    if (q.unit == "mm") return q.value * 1e-3;
    throw ConfigError("key '" + key + "': unknown length unit '" + q.unit + "'");
}

inline double as_plain(const std::string& key, const Quantity& q) {
    if (!q.unit.empty()) throw ConfigError("key '" + key + "' takes no unit, got '" + q.unit + "'");
    return q.value;
}

inline std::size_t as_count(const std::string& key, const Quantity& q) {
    const double v = as_plain(key, q);
    if (v < 0.0 || v != std::floor(v) || v > 1e15)
        throw ConfigError("key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

inline bool as_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean");
}

} // namespace detail

/// Parses config text. Unknown keys, duplicate keys and bad units are errors.
inline ExperimentConfig parse_config(std::string_view text) {
    using namespace detail;
    ExperimentConfig c;
    std::optional<double> sigma2_downlink;
    std::map<std::string, std::function<void(std::string_view)>> setters;
    auto num = [](const std::string& k, std::string_view v) { return parse_quantity(k, v); };
    auto set = [&](const std::string& key, std::function<void(const std::string&, std::string_view)> f) {
        setters[key] = [key, f](std::string_view v) { f(key, v); };
    };
    set("fc", [&](auto& k, auto v) { c.fc = as_frequency(k, num(k, v)); });
    set("n_eff", [&](auto& k, auto v) { c.n_eff = as_plain(k, num(k, v)); });
    set("sigma2", [&](auto& k, auto v) { c.sigma2 = as_power(k, num(k, v)); });
    set("sigma2_downlink", [&](auto& k, auto v) { sigma2_downlink = as_power(k, num(k, v)); });
    set("d", [&](auto& k, auto v) { c.d = as_length(k, num(k, v)); });
    set("y_p", [&](auto& k, auto v) { c.y_p = as_length(k, num(k, v)); });
    set("Dx", [&](auto& k, auto v) { c.dx = as_length(k, num(k, v)); });
    set("Dy", [&](auto& k, auto v) { c.dy = as_length(k, num(k, v)); });
    set("q0", [&](auto& k, auto v) { c.q0 = as_length(k, num(k, v)); });
    set("q_max", [&](auto& k, auto v) { c.q_max = as_length(k, num(k, v)); });
    set("q_fixed", [&](auto& k, auto v) { c.q_fixed = as_length(k, num(k, v)); });
    set("P1", [&](auto& k, auto v) { c.p1 = as_power(k, num(k, v)); });
    set("P2", [&](auto& k, auto v) { c.p2 = as_power(k, num(k, v)); });
    set("P", [&](auto& k, auto v) { c.p_total = as_power(k, num(k, v)); });
    set("N", [&](auto& k, auto v) { c.n = as_count(k, num(k, v)); });
    set("delta", [&](auto& k, auto v) {
        const auto q = num(k, v);
        if (q.unit == "lambda") {
            c.delta_lambda = q.value;
            c.delta_m.reset();
        } else {
            c.delta_m = as_length(k, q);
        }
    });
    set("Q", [&](auto& k, auto v) { c.grid_points = as_count(k, num(k, v)); });
    set("full_grid", [&](auto& k, auto v) { c.full_grid = as_bool(k, v); });
    set("alpha_points", [&](auto& k, auto v) { c.alpha_points = as_count(k, num(k, v)); });
    set("rho_points", [&](auto& k, auto v) { c.rho_points = as_count(k, num(k, v)); });
    set("split_points", [&](auto& k, auto v) { c.split_points = as_count(k, num(k, v)); });
    set("restarts", [&](auto& k, auto v) { c.restarts = as_count(k, num(k, v)); });
    set("n_max", [&](auto& k, auto v) { c.n_max = as_count(k, num(k, v)); });
    set("trials", [&](auto& k, auto v) { c.trials = as_count(k, num(k, v)); });
    set("seed", [&](auto& k, auto v) {
        const std::string s(v);
        std::size_t pos = 0;
        try {
            if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) c.seed = std::stoull(s, &pos, 0);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != s.size()) throw ConfigError("key '" + k + "': expected an unsigned integer");
    });
    set("experiment", [&](auto&, auto v) { c.experiment = std::string(v); });

    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (auto h = sv.find('#'); h != std::string_view::npos) sv = sv.substr(0, h);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(trim(sv.substr(0, eq)));
        const auto value = trim(sv.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (seen[key]++) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        it->second(value);
    }
    if (sigma2_downlink && std::abs(*sigma2_downlink - c.sigma2) > 1e-9 * c.sigma2)
        throw ConfigError("downlink noise differs from uplink noise; only the dual-channel setup is supported");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// Checks the configuration invariants. Throws ConfigError for bad values
/// and InfeasibleDeployment when the geometry cannot host the deployment.
inline void validate(const ExperimentConfig& c) {
    const auto& ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end())
        throw ConfigError("unknown experiment '" + c.experiment + "'");
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(c.fc > 0.0, "fc must be positive");
    require(c.n_eff >= 1.0, "n_eff must be >= 1");
    require(c.sigma2 > 0.0, "sigma2 must be positive");
    require(c.d > 0.0, "d must be positive");
    require(c.dx > 0.0, "Dx must be positive");
    require(c.dy >= 0.0, "Dy must be >= 0");
    require(c.p1 >= 0.0 && c.p2 >= 0.0 && c.p_total >= 0.0, "powers must be >= 0");
    require(c.n >= 1, "N must be >= 1");
    require(c.delta_m ? *c.delta_m > 0.0 : c.delta_lambda > 0.0, "delta must be positive");
    require(c.search_grid() >= 2, "Q must be >= 2");
    require(c.alpha_points >= 2, "alpha_points must be >= 2");
    require(c.rho_points >= 2, "rho_points must be >= 2");
    require(c.split_points >= 2, "split_points must be >= 2");
    require(c.restarts >= 1, "restarts must be >= 1");
    require(c.trials >= 1, "trials must be >= 1");
    require(c.n_max >= 2, "n_max must be >= 2");

    const SystemParams p = c.params();
    const double lo = c.range_lo(), hi = c.range_hi();
    if (!(lo <= hi)) throw InfeasibleDeployment("q0 exceeds q_max");
    if (lo > -c.dx / 2 || hi < c.dx / 2)
        throw InfeasibleDeployment("deployment range does not cover the user region");
    if (c.q_fixed < lo || c.q_fixed > hi) throw InfeasibleDeployment("fixed antenna lies outside the range");
    if (c.multi_pinch() && static_cast<double>(c.n) * c.delta(p) > hi - lo)
        throw InfeasibleDeployment("N * delta exceeds the deployment range");
}

} // namespace pass::harness
