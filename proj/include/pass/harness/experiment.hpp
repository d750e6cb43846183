#pragma once

// Monte Carlo experiment runners. Trials run on a small work pool; results
// are gathered by index and rendered in trial order, so the output bytes do
// not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pass/downlink.hpp"
#include "pass/harness/config.hpp"
#include "pass/harness/region_io.hpp"
#include "pass/harness/sampling.hpp"
#include "pass/uplink_multi.hpp"
#include "pass/uplink_single.hpp"

#ifndef PASS_VERSION
#define PASS_VERSION "0.1.0"
#endif

namespace pass::harness {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedRegion {
    std::string name;
    RateRegion region;
};

struct TrialRecord {
    std::size_t index = 0;
    std::array<UserPosition, 2> users{};
    std::vector<NamedRegion> regions;
    std::vector<std::pair<std::string, double>> scalars;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> trials;
    std::vector<NamedRegion> averaged;
    nlohmann::json extras = nlohmann::json::object();
    std::string sweep_csv;  // antenna-sweep only
};

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). The first exception in index order is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline MultiOptions multi_options(const ExperimentConfig& c, std::size_t trial) {
    MultiOptions o;
    o.grid_points = c.search_grid();
    o.alpha_points = c.alpha_points;
    o.rho_points = c.rho_points;
    o.restarts = c.restarts;
    o.seed = splitmix64(c.seed ^ splitmix64(trial));
    return o;
}

inline TrialRecord run_trial(const ExperimentConfig& c, std::size_t trial) {
    const SystemParams params = c.params();
    TrialRecord rec;
    rec.index = trial;
    rec.users = sample_users(c, trial);
    const Scenario sc = make_scenario(c, rec.users);
    auto add = [&](std::string name, RateRegion r) { rec.regions.push_back({std::move(name), std::move(r)}); };
    auto scalar = [&](std::string name, double v) { rec.scalars.emplace_back(std::move(name), v); };

    if (c.experiment == "uplink-single") {
        add("fixed", fixed_antenna_region(c.q_fixed, sc, params));
        add("fixed_tdma", fixed_antenna_tdma_region(c.q_fixed, sc, params));
        add("fixed_fdma", fixed_antenna_fdma_region(c.q_fixed, sc, params, c.rho_points));
        add("capacity", capacity_region_single(sc, params, c.alpha_points));
        add("tdma", tdma_region_single(sc, params));
        add("fdma", fdma_region_single(sc, params, c.alpha_points, c.rho_points));
        scalar("r1_tdma", tdma_intercept_single(User::first, sc, params));
        scalar("r2_tdma", tdma_intercept_single(User::second, sc, params));
    } else if (c.experiment == "uplink-multi") {
        const MultiPinchContext ctx(c.n, sc, params, multi_options(c, trial));
        add("fixed", fixed_antenna_region(c.q_fixed, sc, params));
        add("inner", inner_bound_region(ctx, sc));
        const PentagonSpec caps = outer_bound_spec(ctx, sc);
        add("outer", pentagon(caps));
        add("tdma", tdma_region_multi(ctx, sc));
        add("fdma_inner", fdma_inner_bound_multi(ctx, sc));
        scalar("r1_max", caps.r1_max);
        scalar("r2_max", caps.r2_max);
        scalar("r_sum", caps.r12_max);
    } else if (c.experiment == "downlink-single") {
        const PowerSplitGrid grid(c.p_total, c.split_points);
        add("fixed", downlink_fixed_antenna_region(c.q_fixed, sc, params, grid));
        auto r = downlink_regions_single(sc, params, grid, {c.alpha_points, c.rho_points});
        add("capacity", std::move(r.capacity));
        add("tdma", std::move(r.tdma));
        add("fdma", std::move(r.fdma));
    } else if (c.experiment == "downlink-multi") {
        const PowerSplitGrid grid(c.p_total, c.split_points);
        const MultiPinchContext ctx(c.n, sc, params, multi_options(c, trial));
        add("fixed", downlink_fixed_antenna_region(c.q_fixed, sc, params, grid));
        auto r = downlink_regions_multi(ctx, grid);
        add("inner", std::move(r.cap_inner));
        add("outer", std::move(r.cap_outer));
        add("tdma", std::move(r.tdma));
        add("fdma_inner", std::move(r.fdma_inner));
    } else {
        throw ConfigError("experiment '" + c.experiment + "' has no trials");
    }
    for (const auto& nr : rec.regions) {
        scalar(nr.name + "_r1_max", nr.region.r1_max());
        scalar(nr.name + "_r2_max", nr.region.r2_max());
    }
    return rec;
}

/// Mean support value per angle across trials, reconstructed as a region.
inline RateRegion average_region(const std::vector<const RateRegion*>& regions) {
    const auto angles = support_angles();
    std::vector<double> mean(angles.size(), 0.0);
    for (const RateRegion* r : regions) {
        const auto h = support_profile(*r, angles);
        for (std::size_t i = 0; i < h.size(); ++i) mean[i] += h[i];
    }
    for (double& v : mean) v /= static_cast<double>(regions.size());
    return region_from_support(angles, mean);
}

/// Largest relative support change between the duality region on M splits
/// and on 2M - 1 splits (which contains the M-point grid).
inline double split_convergence(const ExperimentConfig& c, const Scenario& sc) {
    const SystemParams params = c.params();
    const PowerSplitGrid coarse(c.p_total, c.split_points);
    const PowerSplitGrid fine(c.p_total, 2 * c.split_points - 1);
    RateRegion a, b;
    if (c.experiment == "downlink-single") {
        auto f = [&](const Scenario& s) { return capacity_region_single(s, params, c.alpha_points); };
        a = duality_region(f, sc, coarse);
        b = duality_region(f, sc, fine);
    } else {
        const MultiPinchContext ctx(c.n, sc, params, multi_options(c, 0));
        auto f = [&](const Scenario& s) { return outer_bound_region(ctx, s); };
        a = duality_region(f, sc, coarse);
        b = duality_region(f, sc, fine);
    }
    double worst = 0.0;
    for (double t : support_angles()) {
        const double hb = support(b, t);
        if (hb > 0.0) worst = std::max(worst, (hb - support(a, t)) / hb);
    }
    return worst;
}

inline std::string antenna_sweep_csv(const ExperimentConfig& c, std::size_t& best_exact,
                                     std::size_t& best_approx) {
    const SystemParams params = c.params();
    const double delta = c.delta(params);
    std::string out = "N,R1_bound,R2_bound,sum_bound\n";
    double best = -1.0;
    best_exact = 1;
    for (std::size_t n = 1; n <= c.n_max; ++n) {
        const double a = array_gain_bound_exact(n, delta, c.d, params);
        const double r1 = rate(c.p1 * a / c.sigma2);
        const double r2 = rate(c.p2 * a / c.sigma2);
        const double rs = rate((c.p1 + c.p2) * a / c.sigma2);
        if (rs > best) {
            best = rs;
            best_exact = n;
        }
        out += std::to_string(n) + ',' + format_number(r1) + ',' + format_number(r2) + ',' +
               format_number(rs) + '\n';
    }
    best_approx = optimal_antenna_count(delta, c.d, params, c.n_max);
    return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c, unsigned workers = 0) {
    validate(c);
    ExperimentResult res;
    res.config = c;
    if (c.experiment == "antenna-sweep") {
        std::size_t exact = 0, approx = 0;
        res.sweep_csv = antenna_sweep_csv(c, exact, approx);
        res.extras["optimal_N_exact"] = exact;
        res.extras["optimal_N_approx"] = approx;
        return res;
    }
    res.trials.resize(c.trials);
    parallel_for(c.trials, [&](std::size_t i) { res.trials[i] = run_trial(c, i); }, workers);

    const auto& first = res.trials.front().regions;
    for (std::size_t j = 0; j < first.size(); ++j) {
        std::vector<const RateRegion*> rs;
        for (const auto& t : res.trials) rs.push_back(&t.regions[j].region);
        res.averaged.push_back({first[j].name, average_region(rs)});
    }
    auto avg = [&](const std::string& name) -> const RateRegion& {
        for (const auto& nr : res.averaged)
            if (nr.name == name) return nr.region;
        throw InternalConsistency("missing averaged region " + name);
    };
    nlohmann::json checks = nlohmann::json::object();
    if (c.experiment == "uplink-single" || c.experiment == "downlink-single") {
        checks["tdma_in_fdma"] = contains(avg("fdma"), avg("tdma"));
        checks["fdma_in_capacity"] = contains(avg("capacity"), avg("fdma"));
        checks["fixed_in_capacity"] = contains(avg("capacity"), avg("fixed"));
    } else {
        checks["inner_in_outer"] = contains(avg("outer"), avg("inner"));
        checks["tdma_in_fdma_inner"] = contains(avg("fdma_inner"), avg("tdma"));
        checks["fdma_inner_in_outer"] = contains(avg("outer"), avg("fdma_inner"));
    }
    res.extras["averaged_checks"] = checks;
    if (c.experiment == "downlink-single" || c.experiment == "downlink-multi") {
        const double change = split_convergence(c, make_scenario(c, res.trials.front().users));
        res.extras["split_convergence"] = {{"splits", c.split_points},
                                           {"max_relative_change", change},
                                           {"below_0.1_percent", change < 1e-3}};
    }
    return res;
}

inline nlohmann::json config_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = c.experiment;
    j["fc_hz"] = c.fc;
    j["n_eff"] = c.n_eff;
    j["sigma2_w"] = c.sigma2;
    j["d_m"] = c.d;
    j["y_p_m"] = c.y_p;
    j["Dx_m"] = c.dx;
    j["Dy_m"] = c.dy;
    j["q0_m"] = c.range_lo();
    j["q_max_m"] = c.range_hi();
    j["q_fixed_m"] = c.q_fixed;
    j["P1_w"] = c.p1;
    j["P2_w"] = c.p2;
    j["P_w"] = c.p_total;
    j["N"] = c.n;
    j["delta_m"] = c.delta(c.params());
    j["Q"] = c.search_grid();
    j["alpha_points"] = c.alpha_points;
    j["rho_points"] = c.rho_points;
    j["split_points"] = c.split_points;
    j["restarts"] = c.restarts;
    j["n_max"] = c.n_max;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    return j;
}

struct OutputFile {
    std::string path;  // relative to the output directory
    std::string bytes;
};

inline std::string trial_tag(std::size_t i) {
    std::string s = std::to_string(i);
    return "t" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

inline std::vector<OutputFile> render(const ExperimentResult& res) {
    std::vector<OutputFile> files;
    nlohmann::json manifest;
    manifest["version"] = PASS_VERSION;
    manifest["config"] = config_json(res.config);
    manifest["averaging"] = "mean support value at 181 angles in [0, pi/2], reconstructed by half-plane intersection";
    if (!res.sweep_csv.empty()) {
        files.push_back({"antenna_sweep.csv", res.sweep_csv});
        manifest["files"] = {"antenna_sweep.csv"};
        manifest["checksum"] = hex64(fnv1a(res.sweep_csv));
    }
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : res.trials) {
        std::uint64_t h = fnv1a("");
        nlohmann::json regions = nlohmann::json::array();
        for (const auto& nr : t.regions) {
            OutputFile f{"trials/" + trial_tag(t.index) + "_" + nr.name + ".csv", region_csv(nr.region)};
            h = fnv1a(f.bytes, h);
            regions.push_back(f.path);
            files.push_back(std::move(f));
        }
        nlohmann::json scalars = nlohmann::json::object();
        for (const auto& [k, v] : t.scalars) scalars[k] = v;
        trials.push_back({{"index", t.index},
                          {"users", {{t.users[0].x, t.users[0].y}, {t.users[1].x, t.users[1].y}}},
                          {"files", regions},
                          {"scalars", scalars},
                          {"checksum", hex64(h)}});
    }
    if (!res.trials.empty()) manifest["trials"] = trials;
    nlohmann::json averaged = nlohmann::json::array();
    for (const auto& nr : res.averaged) {
        files.push_back({"avg_" + nr.name + ".csv", region_csv(nr.region)});
        averaged.push_back(region_json(nr.region, nr.name));
    }
    if (!res.averaged.empty()) manifest["averaged"] = averaged;
    for (const auto& [k, v] : res.extras.items()) manifest[k] = v;
    files.push_back({"manifest.json", manifest.dump(2) + "\n"});
    return files;
}

inline void write_outputs(const std::vector<OutputFile>& files, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "trials", ec);
    if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto& f : files) {
        std::ofstream out(dir / f.path, std::ios::binary | std::ios::trunc);
        if (!out) throw OutputError("cannot write '" + (dir / f.path).string() + "'");
        out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
        if (!out) throw OutputError("write failed for '" + (dir / f.path).string() + "'");
    }
}

} // namespace pass::harness
