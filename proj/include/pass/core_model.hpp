#pragma once

// Physical model of a single dielectric waveguide carrying N pinching antennas
// serving two ground users: constants, geometry, free-space channels,
// in-waveguide phase and the effective per-user channel.
//
// Everything is in SI units (W, Hz, m). Rates are bits/s/Hz.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pass/errors.hpp"

namespace pass {

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299'792'458.0;

using ComplexGain = std::complex<double>;

/// The two users. `x1 <= x2` always holds after a Scenario is built.
enum class User : std::size_t { first = 0, second = 1 };

constexpr std::size_t index(User u) noexcept { return static_cast<std::size_t>(u); }
constexpr User other(User u) noexcept { return u == User::first ? User::second : User::first; }

struct DerivedConstants {
    double eta;       // path-loss constant c^2 / (16 pi^2 fc^2), m^2
    double lambda;    // free-space wavelength, m
    double lambda_g;  // guided wavelength, m
};

inline DerivedConstants derive_constants(double fc, double n_eff) {
    if (!(fc > 0.0) || !std::isfinite(fc))
        throw InvalidParameter("carrier frequency must be positive and finite");
    if (!(n_eff >= 1.0) || !std::isfinite(n_eff))
        throw InvalidParameter("effective refractive index must be >= 1");
    const double lambda = kSpeedOfLight / fc;
    const double eta = kSpeedOfLight * kSpeedOfLight /
                       (16.0 * std::numbers::pi * std::numbers::pi * fc * fc);
    return {eta, lambda, lambda / n_eff};
}

class SystemParams {
public:
    SystemParams(double fc, double n_eff, double sigma2)
        : fc_(fc), n_eff_(n_eff), sigma2_(sigma2), derived_(derive_constants(fc, n_eff)) {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw InvalidParameter("noise power must be positive");
    }

    double fc() const noexcept { return fc_; }
    double n_eff() const noexcept { return n_eff_; }
    double sigma2() const noexcept { return sigma2_; }
    double eta() const noexcept { return derived_.eta; }
    double lambda() const noexcept { return derived_.lambda; }
    double lambda_g() const noexcept { return derived_.lambda_g; }
    /// Free-space wavenumber 2 pi / lambda.
    double k0() const noexcept { return 2.0 * std::numbers::pi / derived_.lambda; }

    SystemParams with_noise(double sigma2) const { return {fc_, n_eff_, sigma2}; }

private:
    double fc_;
    double n_eff_;
    double sigma2_;
    DerivedConstants derived_;
};

struct UserPosition {
    double x = 0.0;
    double y = 0.0;
};

struct ScenarioSpec {
    double d = 3.0;          // waveguide height
    double y_p = 0.0;        // waveguide y-coordinate
    double q0 = -10.0;       // feed point
    double q_max = 10.0;     // end of the deployment range
    std::array<UserPosition, 2> users{};
    std::array<double, 2> uplink_power{0.01, 0.01};
    double downlink_power = 0.01;
    double delta = 0.0;      // minimum inter-antenna spacing
};

/// Validated deployment geometry and power budgets. Users are sorted by x.
/// Powers may be zero (a silent user); they may not be negative.
class Scenario {
public:
    explicit Scenario(ScenarioSpec spec) : s_(spec) {
        auto& u = s_.users;
        if (u[1].x < u[0].x) {
            std::swap(u[0], u[1]);
            std::swap(s_.uplink_power[0], s_.uplink_power[1]);
        }
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(s_.d) || !finite(s_.y_p) || !finite(s_.q0) || !finite(s_.q_max) ||
            !finite(u[0].x) || !finite(u[0].y) || !finite(u[1].x) || !finite(u[1].y))
            throw InvalidParameter("scenario geometry must be finite");
        if (!(s_.d > 0.0)) throw InvalidParameter("waveguide height d must be positive");
        if (s_.q0 > s_.q_max) throw InvalidParameter("feed point q0 exceeds q_max");
        if (u[0].x < s_.q0 || u[1].x > s_.q_max)
            throw InvalidParameter("user projections must lie inside [q0, q_max]");
        for (double p : s_.uplink_power)
            if (!(p >= 0.0) || !finite(p)) throw InvalidParameter("uplink power must be >= 0");
        if (!(s_.downlink_power >= 0.0) || !finite(s_.downlink_power))
            throw InvalidParameter("downlink power must be >= 0");
        if (!(s_.delta > 0.0) || !finite(s_.delta))
            throw InvalidParameter("minimum antenna spacing must be positive");
    }

    const ScenarioSpec& spec() const noexcept { return s_; }
    double d() const noexcept { return s_.d; }
    double y_p() const noexcept { return s_.y_p; }
    double q0() const noexcept { return s_.q0; }
    double q_max() const noexcept { return s_.q_max; }
    double delta() const noexcept { return s_.delta; }
    double downlink_power() const noexcept { return s_.downlink_power; }

    const UserPosition& user(User k) const noexcept { return s_.users[index(k)]; }
    double x(User k) const noexcept { return user(k).x; }
    double uplink_power(User k) const noexcept { return s_.uplink_power[index(k)]; }

    /// Squared distance from user k to the waveguide axis: d^2 + (y_k - y_p)^2.
    double dk2(User k) const noexcept {
        const double dy = user(k).y - s_.y_p;
        return s_.d * s_.d + dy * dy;
    }

    Scenario with_uplink_powers(double p1, double p2) const {
        ScenarioSpec s = s_;
        s.uplink_power = {p1, p2};
        return Scenario(s);
    }
    Scenario with_range(double q0, double q_max) const {
        ScenarioSpec s = s_;
        s.q0 = q0;
        s.q_max = q_max;
        return Scenario(s);
    }
    Scenario with_delta(double delta) const {
        ScenarioSpec s = s_;
        s.delta = delta;
        return Scenario(s);
    }

private:
    ScenarioSpec s_;
};

/// Relative slack applied to the spacing check so that positions built as
/// q + n * delta are not rejected over rounding.
inline constexpr double kSpacingSlack = 1e-9;

/// Strictly increasing antenna x-coordinates inside [q0, q_max] with
/// neighbouring gaps of at least delta.
class PinchConfig {
public:
    PinchConfig(std::vector<double> q, const Scenario& sc) : q_(std::move(q)) {
        if (q_.empty()) throw InvalidParameter("a pinching configuration needs N >= 1");
        std::sort(q_.begin(), q_.end());
        for (double v : q_) {
            if (!std::isfinite(v) || v < sc.q0() || v > sc.q_max())
                throw InvalidParameter("antenna position outside [q0, q_max]");
        }
        const double min_gap = sc.delta() * (1.0 - kSpacingSlack);
        for (std::size_t n = 1; n < q_.size(); ++n) {
            if (q_[n] - q_[n - 1] < min_gap)
                throw InvalidParameter("antenna spacing below the minimum delta");
        }
    }

    std::size_t size() const noexcept { return q_.size(); }
    std::span<const double> positions() const noexcept { return q_; }
    double operator[](std::size_t n) const { return q_[n]; }

private:
    std::vector<double> q_;
};

struct Point3 {
    double x, y, z;
};

/// Free-space LoS coefficient sqrt(eta) exp(-j k0 r) / r between two points.
inline ComplexGain spatial_channel(const Point3& user, const Point3& antenna,
                                   const SystemParams& params) {
    const double dx = user.x - antenna.x;
    const double dy = user.y - antenna.y;
    const double dz = user.z - antenna.z;
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(r > 0.0)) throw DegenerateGeometry("user coincides with antenna");
    return std::polar(std::sqrt(params.eta()) / r, -params.k0() * r);
}

inline ComplexGain spatial_channel(const UserPosition& user, double antenna_x,
                                   const Scenario& sc, const SystemParams& params) {
    return spatial_channel(Point3{user.x, user.y, 0.0}, Point3{antenna_x, sc.y_p(), sc.d()},
                           params);
}

/// In-waveguide phase 2 pi (x - q0) / lambda_g, left unreduced.
inline double phase_shift(double antenna_x, const Scenario& sc, const SystemParams& params) {
    if (antenna_x < sc.q0()) throw InvalidParameter("antenna lies before the feed point");
    return 2.0 * std::numbers::pi * (antenna_x - sc.q0()) / params.lambda_g();
}

/// Total phase seen by user k through an antenna at x: k0 r + phi.
/// Strictly increasing in x because n_eff >= 1 > |dr/dx|.
inline double total_phase(User k, double antenna_x, const Scenario& sc,
                          const SystemParams& params) {
    const double dx = antenna_x - sc.x(k);
    const double r = std::sqrt(sc.dk2(k) + dx * dx);
    return params.k0() * r + 2.0 * std::numbers::pi * (antenna_x - sc.q0()) / params.lambda_g();
}

/// One antenna's contribution e^{-j phi_n} h(u_k, psi_n), before the 1/sqrt(N) factor.
inline ComplexGain antenna_term(User k, double antenna_x, const Scenario& sc,
                                const SystemParams& params) {
    const double dx = antenna_x - sc.x(k);
    const double r = std::sqrt(sc.dk2(k) + dx * dx);
    return std::polar(std::sqrt(params.eta()) / r, -total_phase(k, antenna_x, sc, params));
}

/// Effective gain (1/sqrt N) sum_n e^{-j phi_n} h(u_k, psi_n) for raw positions.
/// No feasibility checks; the caller owns that.
inline ComplexGain effective_gain(User k, std::span<const double> q, const Scenario& sc,
                                  const SystemParams& params) {
    ComplexGain acc{0.0, 0.0};
    for (double x : q) acc += antenna_term(k, x, sc, params);
    return acc / std::sqrt(static_cast<double>(q.size()));
}

inline ComplexGain effective_gain(User k, const PinchConfig& config, const Scenario& sc,
                                  const SystemParams& params) {
    return effective_gain(k, config.positions(), sc, params);
}

/// Single-antenna channel power eta / (d_k^2 + (x_k - q)^2).
inline double single_pinch_gain(User k, double q, const Scenario& sc,
                                const SystemParams& params) {
    const double dx = sc.x(k) - q;
    return params.eta() / (sc.dk2(k) + dx * dx);
}

/// Received SNR P_k |h_k|^2 / sigma^2 of each user.
struct SnrTerms {
    double g1;
    double g2;
    double operator[](User k) const noexcept { return k == User::first ? g1 : g2; }
};

inline double rate(double snr) { return std::log2(1.0 + snr); }

inline SnrTerms snr_terms(std::span<const double> q, const Scenario& sc,
                          const SystemParams& params) {
    const double h1 = std::norm(effective_gain(User::first, q, sc, params));
    const double h2 = std::norm(effective_gain(User::second, q, sc, params));
    return {sc.uplink_power(User::first) * h1 / params.sigma2(),
            sc.uplink_power(User::second) * h2 / params.sigma2()};
}

inline SnrTerms snr_terms(const PinchConfig& config, const Scenario& sc,
                          const SystemParams& params) {
    return snr_terms(config.positions(), sc, params);
}

} // namespace pass
