#pragma once

// Uplink with a single activated pinching antenna (N = 1): fixed-antenna
// baseline, SIC rates, the closed-form rate-profile placement and the
// capacity, TDMA and FDMA regions built from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "pass/core_model.hpp"
#include "pass/detail/solvers.hpp"
#include "pass/region.hpp"

namespace pass {

/// SIC decoding order. ORDER_I = [2, 1] decodes user 2 first, so user 1 is
/// decoded last and sees no interference; ORDER_II = [1, 2] is the reverse.
enum class DecodingOrder { I, II };

inline constexpr std::array<DecodingOrder, 2> kDecodingOrders{DecodingOrder::I, DecodingOrder::II};

constexpr User first_decoded(DecodingOrder o) noexcept {
    return o == DecodingOrder::I ? User::second : User::first;
}
constexpr User second_decoded(DecodingOrder o) noexcept { return other(first_decoded(o)); }

struct SicRates {
    double first;   // rate of the user decoded first (sees interference)
    double second;  // rate of the user decoded last (interference free)
};

/// SIC rates from channel powers |h_k|^2 and transmit powers p_k.
inline SicRates sic_rates_from_gains(DecodingOrder order, std::array<double, 2> gain,
                                     std::array<double, 2> power, double sigma2) {
    if (power[0] < 0.0 || power[1] < 0.0) throw InvalidParameter("transmit power must be >= 0");
    const std::size_t a = index(first_decoded(order));
    const std::size_t b = index(second_decoded(order));
    const double sa = power[a] * gain[a];
    const double sb = power[b] * gain[b];
    return {std::log2(1.0 + sa / (sb + sigma2)), std::log2(1.0 + sb / sigma2)};
}

/// Per-user rate pair (R1, R2) from SIC rates under the given order.
inline RatePair to_rate_pair(DecodingOrder order, const SicRates& r) {
    return first_decoded(order) == User::first ? RatePair{r.first, r.second}
                                               : RatePair{r.second, r.first};
}

inline SicRates sic_rates(DecodingOrder order, double q1, std::array<double, 2> power,
                          const Scenario& sc, const SystemParams& params) {
    if (q1 < sc.q0() || q1 > sc.q_max())
        throw InvalidParameter("antenna position outside [q0, q_max]");
    return sic_rates_from_gains(order,
                                {single_pinch_gain(User::first, q1, sc, params),
                                 single_pinch_gain(User::second, q1, sc, params)},
                                power, params.sigma2());
}

inline SnrTerms fixed_antenna_snr(double q_f, const Scenario& sc, const SystemParams& params) {
    if (q_f < sc.q0() || q_f > sc.q_max())
        throw InvalidParameter("fixed antenna position outside [q0, q_max]");
    auto snr = [&](User k) {
        return sc.uplink_power(k) * std::norm(spatial_channel(sc.user(k), q_f, sc, params)) /
               params.sigma2();
    };
    return {snr(User::first), snr(User::second)};
}

inline RateRegion fixed_antenna_region(double q_f, const Scenario& sc, const SystemParams& params) {
    const SnrTerms g = fixed_antenna_snr(q_f, sc, params);
    return pentagon({rate(g.g1), rate(g.g2), rate(g.g1 + g.g2)});
}

inline RateRegion fixed_antenna_tdma_region(double q_f, const Scenario& sc,
                                            const SystemParams& params) {
    const SnrTerms g = fixed_antenna_snr(q_f, sc, params);
    const RatePair pts[] = {{rate(g.g1), 0.0}, {0.0, rate(g.g2)}};
    return RateRegion::from_points(pts);
}

/// Bisection tolerance on the antenna position.
inline double position_tolerance(const Scenario& sc) {
    return 1e-9 * (sc.x(User::second) - sc.x(User::first));
}

/// Rate-profile optimal single-antenna position for weight alpha and a SIC
/// order. alpha weights the user decoded last and 1 - alpha the user decoded
/// first, i.e. the returned x maximizes min{f2(x)/alpha, f1(x)/(1 - alpha)}
/// over [x1, x2].
inline double theorem1_position(double alpha, DecodingOrder order, const Scenario& sc,
                                const SystemParams& params) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
    const std::array<double, 2> p{sc.uplink_power(User::first), sc.uplink_power(User::second)};
    auto rates = [&](double x) {
        return sic_rates_from_gains(order,
                                    {single_pinch_gain(User::first, x, sc, params),
                                     single_pinch_gain(User::second, x, sc, params)},
                                    p, params.sigma2());
    };
    return detail::maximize_weighted_min(
        sc.x(User::first), sc.x(User::second), [&](double x) { return rates(x).second; }, alpha,
        [&](double x) { return rates(x).first; }, 1.0 - alpha, position_tolerance(sc));
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    if (count < 2) throw InvalidParameter("grid needs at least two points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.back() = hi;
    return g;
}

namespace detail {

// Adds points along x -> curve(x) between consecutive samples until no chord
// sits more than eps inside the curve on the side away from the origin.
template <class Curve>
void refine_frontier(std::vector<RatePair>& out, std::vector<double> xs, Curve&& curve,
                     double eps = 1e-10, int max_depth = 30) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    auto outward_gap = [](const RatePair& a, const RatePair& b, const RatePair& m) {
        double nx = b.r2 - a.r2, ny = a.r1 - b.r1;
        const double len = std::hypot(nx, ny);
        if (len == 0.0) return 0.0;
        if (nx * a.r1 + ny * a.r2 < 0.0) {
            nx = -nx;
            ny = -ny;
        }
        return (nx * (m.r1 - a.r1) + ny * (m.r2 - a.r2)) / len;
    };
    auto split = [&](auto&& self, double xa, const RatePair& a, double xb, const RatePair& b,
                     int depth) -> void {
        if (depth >= max_depth) return;
        const double xm = 0.5 * (xa + xb);
        if (!(xm > xa && xm < xb)) return;
        const RatePair m = curve(xm);
        if (outward_gap(a, b, m) <= eps) return;
        out.push_back(m);
        self(self, xa, a, xm, m, depth + 1);
        self(self, xm, m, xb, b, depth + 1);
    };
    std::vector<RatePair> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back(curve(x));
    out.insert(out.end(), pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) split(split, xs[i], pts[i], xs[i + 1], pts[i + 1], 0);
}

} // namespace detail

namespace detail {

// Evenly spaced positions on [x1, x2] added to every refined frontier. The
// SIC and FDMA curves are not concave everywhere, so midpoint tests alone can
// stop early on a stretch that still bulges outward.
inline constexpr std::size_t kFrontierSeed = 1025;

} // namespace detail

inline std::vector<double> frontier_seed(const Scenario& sc) {
    const double x1 = sc.x(User::first), x2 = sc.x(User::second);
    if (!(x2 > x1)) return {x1};
    return uniform_grid(x1, x2, detail::kFrontierSeed);
}

/// Single-pinch uplink capacity region: rate-profile SIC points for both
/// orders over a uniform alpha grid, with the frontier between neighbouring
/// optimal positions refined so the hull is within 1e-10 of the exact one.
inline RateRegion capacity_region_single(const Scenario& sc, const SystemParams& params,
                                         std::size_t alpha_grid_size = 201) {
    if (alpha_grid_size < 2) throw InvalidParameter("alpha grid needs at least two points");
    const std::array<double, 2> p{sc.uplink_power(User::first), sc.uplink_power(User::second)};
    const auto alphas = uniform_grid(0.0, 1.0, alpha_grid_size);
    std::vector<RatePair> pts;
    for (DecodingOrder order : kDecodingOrders) {
        std::vector<double> xs;
        xs.reserve(alphas.size() + 2);
        for (double a : alphas) xs.push_back(theorem1_position(a, order, sc, params));
        const auto seed = frontier_seed(sc);
        xs.insert(xs.end(), seed.begin(), seed.end());
        detail::refine_frontier(pts, std::move(xs), [&](double x) {
            return to_rate_pair(order, sic_rates(order, x, p, sc, params));
        });
    }
    return RateRegion::from_points(pts);
}

/// log2(1 + gamma_k) with the antenna parked at the user's projection.
inline double tdma_intercept_single(User k, const Scenario& sc, const SystemParams& params) {
    return rate(sc.uplink_power(k) * params.eta() / (sc.dk2(k) * params.sigma2()));
}

inline RateRegion tdma_region_single(const Scenario& sc, const SystemParams& params) {
    const RatePair pts[] = {{tdma_intercept_single(User::first, sc, params), 0.0},
                            {0.0, tdma_intercept_single(User::second, sc, params)}};
    return RateRegion::from_points(pts);
}

/// rho log2(1 + snr / rho), extended continuously to 0 at rho = 0.
inline double band_rate(double rho, double snr) {
    if (rho <= 0.0) return 0.0;
    return rho * std::log2(1.0 + snr / rho);
}

/// FDMA rates (r1^rho(x), r2^rho(x)) with user 1 on bandwidth fraction rho.
inline RatePair fdma_rates_single(double rho, double x, const Scenario& sc,
                                  const SystemParams& params) {
    const double g1 = sc.uplink_power(User::first) * single_pinch_gain(User::first, x, sc, params) /
                      params.sigma2();
    const double g2 = sc.uplink_power(User::second) *
                      single_pinch_gain(User::second, x, sc, params) / params.sigma2();
    return {band_rate(rho, g1), band_rate(1.0 - rho, g2)};
}

/// FDMA rate-profile position: argmax over [x1, x2] of
/// min{r1(x)/alpha_F, r2(x)/(1 - alpha_F)}.
inline double theorem2_position(double alpha_f, double rho_f, const Scenario& sc,
                                const SystemParams& params) {
    if (!(alpha_f >= 0.0 && alpha_f <= 1.0)) throw InvalidParameter("alpha_F must lie in [0, 1]");
    if (!(rho_f >= 0.0 && rho_f <= 1.0)) throw InvalidParameter("rho_F must lie in [0, 1]");
    return detail::maximize_weighted_min(
        sc.x(User::first), sc.x(User::second),
        [&](double x) { return fdma_rates_single(rho_f, x, sc, params).r1; }, alpha_f,
        [&](double x) { return fdma_rates_single(rho_f, x, sc, params).r2; }, 1.0 - alpha_f,
        position_tolerance(sc));
}

/// Single-pinch FDMA region: for every bandwidth split on the rho grid, the
/// rate-profile positions over the alpha grid, with the curve between them
/// refined as in capacity_region_single.
inline RateRegion fdma_region_single(const Scenario& sc, const SystemParams& params,
                                     std::size_t alpha_grid = 201, std::size_t rho_grid = 101) {
    const auto alphas = uniform_grid(0.0, 1.0, alpha_grid);
    const auto rhos = uniform_grid(0.0, 1.0, rho_grid);
    const auto seed = frontier_seed(sc);
    std::vector<RatePair> pts;
    for (double rho : rhos) {
        std::vector<double> xs(seed);
        for (double a : alphas) xs.push_back(theorem2_position(a, rho, sc, params));
        detail::refine_frontier(pts, std::move(xs),
                                [&](double x) { return fdma_rates_single(rho, x, sc, params); });
    }
    return RateRegion::from_points(pts);
}

inline RateRegion fixed_antenna_fdma_region(double q_f, const Scenario& sc,
                                            const SystemParams& params, std::size_t rho_grid = 101) {
    const SnrTerms g = fixed_antenna_snr(q_f, sc, params);
    std::vector<RatePair> pts;
    for (double rho : uniform_grid(0.0, 1.0, rho_grid))
        pts.push_back({band_rate(rho, g.g1), band_rate(1.0 - rho, g.g2)});
    return RateRegion::from_points(pts);
}

} // namespace pass
