#pragma once

// Uplink with N > 1 pinching antennas: element-wise rate-profile search
// (capacity inner bound), per-user gain maximization, the Cauchy-Schwarz
// outer bound, TDMA/FDMA regions, array-gain scaling and a brute-force
// oracle for N <= 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "pass/core_model.hpp"
#include "pass/detail/solvers.hpp"
#include "pass/region.hpp"
#include "pass/uplink_single.hpp"

namespace pass {

/// Uniform search grid of Q points over [q0, q_max].
struct GridSpec {
    std::vector<double> points;

    GridSpec(std::size_t q, const Scenario& sc) {
        if (q < 2) throw InvalidParameter("search grid needs Q >= 2");
        points = uniform_grid(sc.q0(), sc.q_max(), q);
    }
    std::size_t size() const noexcept { return points.size(); }
};

struct MultiOptions {
    std::size_t grid_points = 2000;      // Q
    std::size_t alpha_points = 201;
    std::size_t rho_points = 101;
    std::size_t restarts = 3;            // uniform start plus restarts - 1 jittered ones
    double epsilon_conv = 1e-6;          // fractional objective improvement
    std::size_t max_iterations = 100;
    std::uint64_t seed = 0x5eed'0f'a11ULL;
};

namespace detail {

// Objective of one rate-profile subproblem, evaluated from |h1|^2, |h2|^2.
struct SicObjective {
    DecodingOrder order;
    double alpha;  // weight on user 1
    std::array<double, 2> power;
    double sigma2;

    RatePair rates(double h1, double h2) const {
        return to_rate_pair(order, sic_rates_from_gains(order, {h1, h2}, power, sigma2));
    }
    double value(double h1, double h2) const {
        const RatePair r = rates(h1, h2);
        double v = std::numeric_limits<double>::infinity();
        if (alpha > 0.0) v = std::min(v, r.r1 / alpha);
        if (alpha < 1.0) v = std::min(v, r.r2 / (1.0 - alpha));
        return v;
    }
};

struct FdmaObjective {
    double alpha;  // weight on user 1
    double rho;    // bandwidth fraction of user 1
    std::array<double, 2> power;
    double sigma2;

    RatePair rates(double h1, double h2) const {
        return {band_rate(rho, power[0] * h1 / sigma2), band_rate(1.0 - rho, power[1] * h2 / sigma2)};
    }
    double value(double h1, double h2) const {
        const RatePair r = rates(h1, h2);
        double v = std::numeric_limits<double>::infinity();
        if (alpha > 0.0) v = std::min(v, r.r1 / alpha);
        if (alpha < 1.0) v = std::min(v, r.r2 / (1.0 - alpha));
        return v;
    }
};

} // namespace detail

struct ElementWiseResult {
    std::vector<double> positions;  // sorted
    RatePair rates;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Geometry-only state shared by every multi-pinch computation on one
/// scenario: the grid, each user's per-antenna channel on every grid point
/// and the gain-maximizing placements. Independent of transmit powers, so it
/// is built once and reused across power splits.
class MultiPinchContext {
public:
    MultiPinchContext(std::size_t n, const Scenario& sc, const SystemParams& params,
                      const MultiOptions& opt = {});

    std::size_t antennas() const noexcept { return n_; }
    const Scenario& scenario() const noexcept { return sc_; }
    const SystemParams& params() const noexcept { return params_; }
    const MultiOptions& options() const noexcept { return opt_; }
    const GridSpec& grid() const noexcept { return grid_; }
    const std::vector<ComplexGain>& table(User k) const noexcept { return table_[index(k)]; }
    /// Gain-maximizing placement for user k; throws InfeasibleDeployment when
    /// N * delta exceeds the range.
    const PinchConfig& best_config(User k) const {
        const auto& b = best_[index(k)];
        if (!b) throw InfeasibleDeployment("N * delta exceeds the deployment range");
        return *b;
    }

    /// Starting configurations for the element-wise search.
    std::vector<std::vector<double>> initial_configs() const;

    /// Element-wise coordinate ascent from init; each antenna moves to the best
    /// grid point that respects the spacing to all others, or stays put.
    template <class Objective>
    ElementWiseResult optimize(std::vector<double> init, const Objective& obj) const;

private:
    std::size_t n_;
    Scenario sc_;
    SystemParams params_;
    MultiOptions opt_;
    GridSpec grid_;
    std::array<std::vector<ComplexGain>, 2> table_;
    std::array<std::optional<PinchConfig>, 2> best_;
};

namespace detail {

// N antennas at the given spacing centered on c, shifted to fit [q0, q_max].
inline std::vector<double> centered_pack(double c, std::size_t n, double spacing,
                                         const Scenario& sc) {
    const double span = spacing * static_cast<double>(n - 1);
    double start = c - span / 2;
    start = std::min(start, sc.q_max() - span);
    start = std::max(start, sc.q0());
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = start + spacing * static_cast<double>(i);
    if (n > 0) q.back() = std::min(q.back(), sc.q_max());
    return q;
}

// Sorts, pushes neighbours apart to delta and shifts back inside the range.
inline std::vector<double> repair_spacing(std::vector<double> q, const Scenario& sc) {
    std::sort(q.begin(), q.end());
    const double d = sc.delta();
    for (auto& v : q) v = std::clamp(v, sc.q0(), sc.q_max());
    for (std::size_t i = 1; i < q.size(); ++i) q[i] = std::max(q[i], q[i - 1] + d);
    if (!q.empty() && q.back() > sc.q_max()) {
        q.back() = sc.q_max();
        for (std::size_t i = q.size() - 1; i-- > 0;) q[i] = std::min(q[i], q[i + 1] - d);
    }
    return q;
}

inline double amplitude_sum(User k, std::span<const double> q, const Scenario& sc) {
    double s = 0.0;
    for (double x : q) {
        const double dx = x - sc.x(k);
        s += 1.0 / std::sqrt(sc.dk2(k) + dx * dx);
    }
    return s;
}

// Smallest x >= lower whose total phase is congruent to ref mod 2 pi.
inline std::optional<double> next_aligned(User k, double lower, double ref, const Scenario& sc,
                                          const SystemParams& params) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (lower > sc.q_max()) return std::nullopt;
    auto phi = [&](double x) { return total_phase(k, x, sc, params); };
    const double target = ref + two_pi * std::ceil((phi(lower) - ref) / two_pi);
    if (phi(lower) >= target) return lower;
    double hi = lower + params.lambda_g();
    while (phi(hi) < target) {
        if (hi > sc.q_max()) return std::nullopt;
        hi = lower + 2.0 * (hi - lower);
    }
    auto f = [&](double x) { return phi(x) - target; };
    auto df = [&](double x) {
        const double dx = x - sc.x(k);
        return params.k0() * dx / std::sqrt(sc.dk2(k) + dx * dx) + two_pi / params.lambda_g();
    };
    const double x = safeguarded_newton(f, df, lower, hi, 80, 1e-14);
    if (x > sc.q_max()) return std::nullopt;
    return x;
}

// Phase-aligned chain starting at s: each next antenna sits at the first
// position at least delta further on that shares the first antenna's phase.
inline std::optional<std::vector<double>> aligned_chain(User k, double s, std::size_t n,
                                                        const Scenario& sc,
                                                        const SystemParams& params) {
    if (s < sc.q0() || s > sc.q_max()) return std::nullopt;
    std::vector<double> q{s};
    const double ref = total_phase(k, s, sc, params);
    while (q.size() < n) {
        auto nx = next_aligned(k, q.back() + sc.delta(), ref, sc, params);
        if (!nx) return std::nullopt;
        q.push_back(*nx);
    }
    return q;
}

} // namespace detail

/// Placement maximizing |h_k(q)|^2. Stage one packs N antennas at spacing
/// delta centered on x_k; stage two searches over phase-aligned chains
/// (every antenna's total phase equal mod 2 pi, so the Cauchy-Schwarz bound
/// is met with equality) for the one with the largest coherent amplitude.
/// The better of the two stages is returned.
inline PinchConfig maximize_user_gain(User k, std::size_t n, const Scenario& sc,
                                      const SystemParams& params) {
    if (n == 0) throw InvalidParameter("need at least one antenna");
    if (static_cast<double>(n) * sc.delta() > sc.q_max() - sc.q0())
        throw InfeasibleDeployment("N * delta exceeds the deployment range");
    if (n == 1) return PinchConfig({sc.x(k)}, sc);

    auto gain = [&](std::span<const double> q) { return std::norm(effective_gain(k, q, sc, params)); };

    std::vector<double> stage1 = detail::centered_pack(sc.x(k), n, sc.delta(), sc);
    double best_gain = gain(stage1);
    std::vector<double> best = stage1;

    auto chain_value = [&](double s) -> double {
        auto c = detail::aligned_chain(k, s, n, sc, params);
        return c ? detail::amplitude_sum(k, *c, sc) : -1.0;
    };

    // Center the chain on x_k, then scan starts around that point.
    double s_c = sc.x(k);
    for (int pass = 0; pass < 2; ++pass) {
        auto c = detail::aligned_chain(k, std::clamp(s_c, sc.q0(), sc.q_max()), n,
                                       sc.with_range(sc.q0(), std::numeric_limits<double>::max()),
                                       params);
        if (!c) break;
        s_c = sc.x(k) - (c->back() - c->front()) / 2;
        if (pass == 1) s_c = std::clamp(s_c, sc.q0(), sc.q_max() - (c->back() - c->front()));
    }
    const double period = std::max(sc.delta(), params.lambda_g());
    const double half_window = 1.5 * period + params.lambda_g();
    const double step = params.lambda_g() / 64.0;
    double best_s = std::numeric_limits<double>::quiet_NaN();
    double best_amp = -1.0;
    for (double s = s_c - half_window; s <= s_c + half_window; s += step) {
        const double v = chain_value(s);
        if (v > best_amp) {
            best_amp = v;
            best_s = s;
        }
    }
    if (best_amp > 0.0) {
        // Golden-section polish around the best scanned start.
        double a = best_s - step, b = best_s + step;
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = chain_value(c), fd = chain_value(d);
        for (int it = 0; it < 60; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = chain_value(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = chain_value(d);
            }
        }
        for (double s : {best_s, c, d}) {
            if (auto chain = detail::aligned_chain(k, s, n, sc, params)) {
                const double g = gain(*chain);
                if (g > best_gain) {
                    best_gain = g;
                    best = std::move(*chain);
                }
            }
        }
    }
    return PinchConfig(std::move(best), sc);
}

inline MultiPinchContext::MultiPinchContext(std::size_t n, const Scenario& sc,
                                            const SystemParams& params, const MultiOptions& opt)
    : n_(n),
      sc_(sc),
      params_(params),
      opt_(opt),
      grid_(opt.grid_points, sc) {
    if (static_cast<double>(n) * sc.delta() <= sc.q_max() - sc.q0()) {
        best_[0] = maximize_user_gain(User::first, n, sc, params);
        best_[1] = maximize_user_gain(User::second, n, sc, params);
    }
    for (User k : {User::first, User::second}) {
        auto& t = table_[index(k)];
        t.reserve(grid_.size());
        for (double x : grid_.points) t.push_back(antenna_term(k, x, sc, params));
    }
}

inline std::vector<std::vector<double>> MultiPinchContext::initial_configs() const {
    const double x1 = sc_.x(User::first), x2 = sc_.x(User::second);
    std::vector<std::vector<double>> starts;
    if (n_ == 1) {
        starts.push_back({0.5 * (x1 + x2)});
    } else {
        const double spread = (x2 - x1) / static_cast<double>(n_ - 1);
        starts.push_back(spread >= sc_.delta()
                             ? detail::centered_pack(0.5 * (x1 + x2), n_, spread, sc_)
                             : detail::centered_pack(0.5 * (x1 + x2), n_, sc_.delta(), sc_));
    }
    std::mt19937_64 rng(opt_.seed);
    const double lo = std::max(sc_.q0(), x1 - 1.0), hi = std::min(sc_.q_max(), x2 + 1.0);
    for (std::size_t r = 1; r < opt_.restarts; ++r) {
        std::vector<double> q(n_);
        for (auto& v : q) v = lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        starts.push_back(detail::repair_spacing(std::move(q), sc_));
    }
    for (const auto& b : best_) {
        if (!b) continue;
        auto p = b->positions();
        starts.emplace_back(p.begin(), p.end());
    }
    return starts;
}

template <class Objective>
ElementWiseResult MultiPinchContext::optimize(std::vector<double> q, const Objective& obj) const {
    const std::size_t n = q.size();
    if (n == 0) throw InvalidParameter("need at least one antenna");
    const double inv_n = 1.0 / static_cast<double>(n);
    const auto& grid = grid_.points;
    const double delta = sc_.delta();

    std::array<ComplexGain, 2> sum{};
    std::vector<std::array<ComplexGain, 2>> term(n);
    for (std::size_t i = 0; i < n; ++i) {
        term[i] = {antenna_term(User::first, q[i], sc_, params_),
                   antenna_term(User::second, q[i], sc_, params_)};
        sum[0] += term[i][0];
        sum[1] += term[i][1];
    }
    auto objective_of = [&](const ComplexGain& s1, const ComplexGain& s2) {
        return obj.value(std::norm(s1) * inv_n, std::norm(s2) * inv_n);
    };
    double current = objective_of(sum[0], sum[1]);

    ElementWiseResult res;
    std::vector<double> others;
    others.reserve(n);
    for (std::size_t iter = 0; iter < opt_.max_iterations; ++iter) {
        const double before = current;
        for (std::size_t a = 0; a < n; ++a) {
            const ComplexGain p1 = sum[0] - term[a][0];
            const ComplexGain p2 = sum[1] - term[a][1];
            others.clear();
            for (std::size_t m = 0; m < n; ++m)
                if (m != a) others.push_back(q[m]);
            std::sort(others.begin(), others.end());

            double best = objective_of(p1 + term[a][0], p2 + term[a][1]);
            std::size_t best_i = grid.size();
            bool any = false;
            std::size_t j = 0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double x = grid[i];
                while (j < others.size() && others[j] + delta <= x) ++j;
                if (j < others.size() && others[j] - delta < x) continue;  // too close
                any = true;
                const double v = objective_of(p1 + table_[0][i], p2 + table_[1][i]);
                if (v > best) {
                    best = v;
                    best_i = i;
                }
            }
            if (!any)
                throw InfeasibleGrid("no grid point satisfies the spacing constraint for antenna " +
                                         std::to_string(a + 1),
                                     a + 1);
            if (best_i < grid.size()) {
                q[a] = grid[best_i];
                term[a] = {table_[0][best_i], table_[1][best_i]};
                sum[0] = p1 + term[a][0];
                sum[1] = p2 + term[a][1];
            }
            current = best;
        }
        res.iterations = iter + 1;
        const double scale = std::max(std::abs(before), 1e-300);
        if (!(current - before > opt_.epsilon_conv * scale)) break;
    }
    std::sort(q.begin(), q.end());
    res.positions = std::move(q);
    res.objective = current;
    res.rates = obj.rates(std::norm(sum[0]) * inv_n, std::norm(sum[1]) * inv_n);
    return res;
}

inline std::array<double, 2> uplink_powers(const Scenario& sc) {
    return {sc.uplink_power(User::first), sc.uplink_power(User::second)};
}

/// One rate-profile run of the element-wise algorithm: alpha weights user 1
/// and 1 - alpha user 2.
inline std::pair<PinchConfig, RatePair> element_wise_rate_profile(
    double alpha, DecodingOrder order, const PinchConfig& init, const MultiPinchContext& ctx) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
    const auto& sc = ctx.scenario();
    detail::SicObjective obj{order, alpha, uplink_powers(sc), ctx.params().sigma2()};
    auto init_q = init.positions();
    auto res = ctx.optimize(std::vector<double>(init_q.begin(), init_q.end()), obj);
    return {PinchConfig(std::move(res.positions), sc), res.rates};
}

inline std::pair<PinchConfig, RatePair> element_wise_rate_profile(
    double alpha, DecodingOrder order, std::size_t n, const PinchConfig& init,
    std::size_t grid_points, const Scenario& sc, const SystemParams& params) {
    MultiOptions opt;
    opt.grid_points = grid_points;
    return element_wise_rate_profile(alpha, order, init, MultiPinchContext(n, sc, params, opt));
}

/// Capacity inner bound for the powers in `sc` (geometry taken from ctx).
inline RateRegion inner_bound_region(const MultiPinchContext& ctx, const Scenario& sc) {
    const auto starts = ctx.initial_configs();
    const auto alphas = uniform_grid(0.0, 1.0, ctx.options().alpha_points);
    std::vector<RatePair> pts;
    for (DecodingOrder order : kDecodingOrders) {
        for (double a : alphas) {
            detail::SicObjective obj{order, a, uplink_powers(sc), ctx.params().sigma2()};
            for (const auto& s : starts) pts.push_back(ctx.optimize(s, obj).rates);
        }
    }
    return RateRegion::from_points(pts);
}

inline RateRegion inner_bound_region(std::size_t n, const Scenario& sc, const SystemParams& params,
                                     const MultiOptions& opt = {}) {
    return inner_bound_region(MultiPinchContext(n, sc, params, opt), sc);
}

/// f(x) = P1 eta/sigma^2 / (d1^2 + (x - x1)^2) + P2 eta/sigma^2 / (d2^2 + (x - x2)^2)
/// and its first two derivatives.
struct SumBoundCurve {
    double a1, a2, x1, x2, d1, d2;  // a_k = P_k eta / sigma^2, d_k = d_k^2

    SumBoundCurve(const Scenario& sc, const SystemParams& params)
        : a1(sc.uplink_power(User::first) * params.eta() / params.sigma2()),
          a2(sc.uplink_power(User::second) * params.eta() / params.sigma2()),
          x1(sc.x(User::first)),
          x2(sc.x(User::second)),
          d1(sc.dk2(User::first)),
          d2(sc.dk2(User::second)) {}

    double value(double x) const {
        return a1 / (d1 + (x - x1) * (x - x1)) + a2 / (d2 + (x - x2) * (x - x2));
    }
    double slope(double x) const {
        const double u1 = d1 + (x - x1) * (x - x1), u2 = d2 + (x - x2) * (x - x2);
        return -2.0 * a1 * (x - x1) / (u1 * u1) - 2.0 * a2 * (x - x2) / (u2 * u2);
    }
    double curvature(double x) const {
        auto term = [](double a, double d, double t) {
            const double u = d + t * t;
            return a * (6.0 * t * t - 2.0 * d) / (u * u * u);
        };
        return term(a1, d1, x - x1) + term(a2, d2, x - x2);
    }
};

/// Critical points of the sum-bound curve on [x1, x2]: sign changes of its
/// slope on a 4096-point grid, each polished by safeguarded Newton.
inline std::vector<double> sum_bound_critical_points(const Scenario& sc,
                                                     const SystemParams& params) {
    const SumBoundCurve f(sc, params);
    std::vector<double> roots;
    if (!(f.x2 > f.x1)) return roots;
    const auto xs = uniform_grid(f.x1, f.x2, 4096);
    double prev = f.slope(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double cur = f.slope(xs[i]);
        if (prev == 0.0) {
            roots.push_back(xs[i - 1]);
        } else if ((prev < 0.0) != (cur < 0.0) && cur != 0.0) {
            roots.push_back(detail::safeguarded_newton([&](double x) { return f.slope(x); },
                                                       [&](double x) { return f.curvature(x); },
                                                       xs[i - 1], xs[i], 80));
        }
        prev = cur;
    }
    if (prev == 0.0) roots.push_back(xs.back());
    return roots;
}

/// log2(1 + N max f(x)) over the critical points and both endpoints.
inline double sum_rate_outer_bound(std::size_t n, const Scenario& sc, const SystemParams& params) {
    if (n == 0) throw InvalidParameter("need at least one antenna");
    const SumBoundCurve f(sc, params);
    double best = std::max(f.value(f.x1), f.value(f.x2));
    for (double x : sum_bound_critical_points(sc, params)) best = std::max(best, f.value(x));
    return rate(static_cast<double>(n) * best);
}

inline double user_rate(User k, const PinchConfig& q, const Scenario& sc,
                        const SystemParams& params) {
    return rate(sc.uplink_power(k) * std::norm(effective_gain(k, q, sc, params)) / params.sigma2());
}

/// Caps of the outer bound, clamped so the pentagon is well formed.
inline PentagonSpec outer_bound_spec(const MultiPinchContext& ctx, const Scenario& sc) {
    const auto& params = ctx.params();
    double r1 = user_rate(User::first, ctx.best_config(User::first), sc, params);
    double r2 = user_rate(User::second, ctx.best_config(User::second), sc, params);
    double rs = sum_rate_outer_bound(ctx.antennas(), sc, params);
    rs = std::min(rs, r1 + r2);
    r1 = std::min(r1, rs);
    r2 = std::min(r2, rs);
    return {r1, r2, std::max({rs, r1, r2})};
}

inline RateRegion outer_bound_region(const MultiPinchContext& ctx, const Scenario& sc) {
    return pentagon(outer_bound_spec(ctx, sc));
}

inline RateRegion outer_bound_region(std::size_t n, const Scenario& sc, const SystemParams& params,
                                     const MultiOptions& opt = {}) {
    return outer_bound_region(MultiPinchContext(n, sc, params, opt), sc);
}

inline RateRegion tdma_region_multi(const MultiPinchContext& ctx, const Scenario& sc) {
    const RatePair pts[] = {
        {user_rate(User::first, ctx.best_config(User::first), sc, ctx.params()), 0.0},
        {0.0, user_rate(User::second, ctx.best_config(User::second), sc, ctx.params())}};
    return RateRegion::from_points(pts);
}

inline RateRegion tdma_region_multi(std::size_t n, const Scenario& sc, const SystemParams& params) {
    const RatePair pts[] = {
        {user_rate(User::first, maximize_user_gain(User::first, n, sc, params), sc, params), 0.0},
        {0.0, user_rate(User::second, maximize_user_gain(User::second, n, sc, params), sc, params)}};
    return RateRegion::from_points(pts);
}

inline RateRegion fdma_inner_bound_multi(const MultiPinchContext& ctx, const Scenario& sc) {
    const auto starts = ctx.initial_configs();
    const auto alphas = uniform_grid(0.0, 1.0, ctx.options().alpha_points);
    const auto rhos = uniform_grid(0.0, 1.0, ctx.options().rho_points);
    std::vector<RatePair> pts;
    for (double rho : rhos) {
        for (double a : alphas) {
            detail::FdmaObjective obj{a, rho, uplink_powers(sc), ctx.params().sigma2()};
            for (const auto& s : starts) pts.push_back(ctx.optimize(s, obj).rates);
        }
    }
    return RateRegion::from_points(pts);
}

inline RateRegion fdma_inner_bound_multi(std::size_t n, const Scenario& sc,
                                         const SystemParams& params, const MultiOptions& opt = {}) {
    return fdma_inner_bound_multi(MultiPinchContext(n, sc, params, opt), sc);
}

/// Coherent-sum bound (eta/N) |sum_n 1/r_n|^2 for N antennas packed at
/// spacing delta and centered on the user. Even N splits symmetrically
/// around the projection; odd N puts one antenna on it.
inline double array_gain_bound_exact(std::size_t n, double delta, double dk,
                                     const SystemParams& params) {
    if (n == 0) throw InvalidParameter("need at least one antenna");
    if (!(delta >= 0.0) || !(dk > 0.0)) throw InvalidParameter("need delta >= 0 and d_k > 0");
    double s = 0.0;
    if (n % 2 == 0) {
        for (std::size_t i = 1; i <= n / 2; ++i) {
            const double t = (static_cast<double>(i) - 0.5) * delta;
            s += 2.0 / std::sqrt(dk * dk + t * t);
        }
    } else {
        s = 1.0 / dk;
        for (std::size_t i = 1; i <= n / 2; ++i) {
            const double t = static_cast<double>(i) * delta;
            s += 2.0 / std::sqrt(dk * dk + t * t);
        }
    }
    return params.eta() / static_cast<double>(n) * s * s;
}

/// Integral approximation 4 eta asinh(N delta / 2 d_k)^2 / (N delta^2).
inline double array_gain_bound_approx(std::size_t n, double delta, double dk,
                                      const SystemParams& params) {
    if (n < 1) throw InvalidParameter("need at least one antenna");
    if (!(delta > 0.0) || !(dk > 0.0)) throw InvalidParameter("need delta > 0 and d_k > 0");
    const double nd = static_cast<double>(n);
    const double l = std::asinh(nd * delta / (2.0 * dk));
    return 4.0 * params.eta() * l * l / (nd * delta * delta);
}

/// N in [2, n_max] maximizing the approximate array-gain bound (smallest on ties).
inline std::size_t optimal_antenna_count(double delta, double dk, const SystemParams& params,
                                         std::size_t n_max) {
    if (n_max < 2) throw InvalidParameter("n_max must be >= 2");
    std::size_t best_n = 2;
    double best = array_gain_bound_approx(2, delta, dk, params);
    for (std::size_t n = 3; n <= n_max; ++n) {
        const double v = array_gain_bound_approx(n, delta, dk, params);
        if (v > best) {
            best = v;
            best_n = n;
        }
    }
    return best_n;
}

/// Brute-force hull of the MAC pentagons of every feasible grid
/// configuration, for N in {1, 2}. Test oracle only.
inline RateRegion exhaustive_region_oracle(std::size_t n, std::size_t grid_points,
                                           const Scenario& sc, const SystemParams& params) {
    if (n != 1 && n != 2) throw InvalidParameter("exhaustive oracle supports N in {1, 2}");
    const double budget = std::pow(static_cast<double>(grid_points), static_cast<double>(n));
    if (budget > 1e6) throw OracleBudgetExceeded("Q^N exceeds 1e6 configurations");
    const GridSpec grid(grid_points, sc);
    const auto p = uplink_powers(sc);
    std::vector<RatePair> pts;
    auto add = [&](std::span<const double> q) {
        const std::array<double, 2> h{std::norm(effective_gain(User::first, q, sc, params)),
                                      std::norm(effective_gain(User::second, q, sc, params))};
        for (DecodingOrder o : kDecodingOrders)
            pts.push_back(to_rate_pair(o, sic_rates_from_gains(o, h, p, params.sigma2())));
    };
    const auto& g = grid.points;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (n == 1) {
            const double q[] = {g[i]};
            add(q);
            continue;
        }
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (g[j] - g[i] < sc.delta()) continue;
            const double q[] = {g[i], g[j]};
            add(q);
        }
    }
    return RateRegion::from_points(pts);
}

} // namespace pass
