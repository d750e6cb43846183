#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "pass/core_model.hpp"
#include "pass/harness/config.hpp"

namespace pass::harness {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based uniform draw in [0, 1): a pure function of (seed, trial, draw).
inline double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) noexcept {
    const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ draw);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Two users uniform over [-Dx/2, Dx/2] x [-Dy/2, Dy/2], sorted by x.
inline std::array<UserPosition, 2> sample_users(const ExperimentConfig& c, std::uint64_t trial) {
    std::array<UserPosition, 2> u;
    for (std::uint64_t k = 0; k < 2; ++k) {
        u[k].x = (uniform01(c.seed, trial, 2 * k) - 0.5) * c.dx;
        u[k].y = (uniform01(c.seed, trial, 2 * k + 1) - 0.5) * c.dy;
    }
    if (u[1].x < u[0].x) std::swap(u[0], u[1]);
    return u;
}

inline Scenario make_scenario(const ExperimentConfig& c, const std::array<UserPosition, 2>& users) {
    ScenarioSpec s;
    s.d = c.d;
    s.y_p = c.y_p;
    s.q0 = c.range_lo();
    s.q_max = c.range_hi();
    s.users = users;
    s.uplink_power = {c.p1, c.p2};
    s.downlink_power = c.p_total;
    s.delta = c.delta(c.params());
    return Scenario(s);
}

} // namespace pass::harness
