#pragma once

// Downlink regions through uplink-downlink duality: the downlink region for
// total power P is the hull of the dual uplink regions over all splits
// P1 + P2 = P.

#include <utility>
#include <vector>

#include "pass/core_model.hpp"
#include "pass/region.hpp"
#include "pass/uplink_multi.hpp"
#include "pass/uplink_single.hpp"

namespace pass {

class PowerSplitGrid {
public:
    /// M uniform splits P1 = t P, t = 0, 1/(M-1), ..., 1.
    PowerSplitGrid(double total_power, std::size_t m) : total_(total_power) {
        if (m < 2) throw InvalidParameter("power split grid needs M >= 2");
        if (!(total_power >= 0.0) || !std::isfinite(total_power))
            throw InvalidParameter("total power must be >= 0");
        for (double t : uniform_grid(0.0, 1.0, m)) {
            const double p1 = t * total_power;
            splits_.emplace_back(p1, total_power - p1);
        }
    }
    /// Explicit list of (P1, P2); each pair must sum to the same total.
    explicit PowerSplitGrid(std::vector<std::pair<double, double>> splits)
        : splits_(std::move(splits)) {
        if (splits_.empty()) throw InvalidParameter("power split grid is empty");
        total_ = splits_.front().first + splits_.front().second;
        for (auto [a, b] : splits_) {
            if (a < 0.0 || b < 0.0) throw InvalidParameter("split powers must be >= 0");
            if (std::abs(a + b - total_) > 1e-12 * std::max(1.0, total_))
                throw InvalidParameter("every split must sum to the same total power");
        }
    }

    double total_power() const noexcept { return total_; }
    std::size_t size() const noexcept { return splits_.size(); }
    const std::vector<std::pair<double, double>>& splits() const noexcept { return splits_; }

private:
    double total_ = 0.0;
    std::vector<std::pair<double, double>> splits_;
};

/// Hull over splits of uplink(sc with uplink powers (P1, P2)).
template <class UplinkRegion>
RateRegion duality_region(UplinkRegion&& uplink, const Scenario& sc, const PowerSplitGrid& grid) {
    std::vector<RateRegion> parts;
    parts.reserve(grid.size());
    for (auto [p1, p2] : grid.splits()) parts.push_back(uplink(sc.with_uplink_powers(p1, p2)));
    return hull_union(parts);
}

inline RateRegion downlink_fixed_antenna_region(double q_f, const Scenario& sc,
                                                const SystemParams& params,
                                                const PowerSplitGrid& grid) {
    return duality_region([&](const Scenario& s) { return fixed_antenna_region(q_f, s, params); },
                          sc, grid);
}

struct SingleRegions {
    RateRegion capacity;
    RateRegion tdma;
    RateRegion fdma;
};

struct SingleGrids {
    std::size_t alpha_points = 201;
    std::size_t rho_points = 101;
};

inline SingleRegions downlink_regions_single(const Scenario& sc, const SystemParams& params,
                                             const PowerSplitGrid& grid,
                                             const SingleGrids& g = {}) {
    return {
        duality_region([&](const Scenario& s) { return capacity_region_single(s, params, g.alpha_points); },
                       sc, grid),
        duality_region([&](const Scenario& s) { return tdma_region_single(s, params); }, sc, grid),
        duality_region(
            [&](const Scenario& s) { return fdma_region_single(s, params, g.alpha_points, g.rho_points); },
            sc, grid),
    };
}

struct MultiRegions {
    RateRegion cap_inner;
    RateRegion cap_outer;
    RateRegion tdma;
    RateRegion fdma_inner;
};

/// The four multi-pinch regions, all built on one geometry context so the
/// channel tables and gain-maximizing placements are computed once.
inline MultiRegions downlink_regions_multi(const MultiPinchContext& ctx, const PowerSplitGrid& grid) {
    const Scenario& sc = ctx.scenario();
    return {
        duality_region([&](const Scenario& s) { return inner_bound_region(ctx, s); }, sc, grid),
        duality_region([&](const Scenario& s) { return outer_bound_region(ctx, s); }, sc, grid),
        duality_region([&](const Scenario& s) { return tdma_region_multi(ctx, s); }, sc, grid),
        duality_region([&](const Scenario& s) { return fdma_inner_bound_multi(ctx, s); }, sc, grid),
    };
}

inline MultiRegions downlink_regions_multi(std::size_t n, const Scenario& sc,
                                           const SystemParams& params, const PowerSplitGrid& grid,
                                           const MultiOptions& opt = {}) {
    return downlink_regions_multi(MultiPinchContext(n, sc, params, opt), grid);
}

} // namespace pass
