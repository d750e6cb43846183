#pragma once

// Two-user rate regions as exact convex polygons in the first quadrant.
//
// A RateRegion is always convex, downward closed and contains the origin. It
// is stored as its hull vertices in counterclockwise order starting at the
// origin, so the lower edge runs along the R1 axis and the last vertex is the
// R2-axis intercept. Containment is certified with support functions plus a
// per-vertex half-plane test, never by rasterizing.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "pass/errors.hpp"

namespace pass {

struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
    friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// Individual and sum-rate caps of a multiple-access pentagon.
struct PentagonSpec {
    double r1_max = 0.0;
    double r2_max = 0.0;
    double r12_max = 0.0;
};

/// Coordinates closer than this are merged before hulling.
inline constexpr double kSnap = 1e-12;
/// Default slack for containment checks, bits/s/Hz.
inline constexpr double kContainTol = 1e-9;
/// Number of equally spaced support angles on [0, pi/2] used by contains().
inline constexpr std::size_t kSupportAngles = 181;

namespace detail {

inline double snap(double v) {
    const double s = std::round(v / kSnap) * kSnap;
    return s == 0.0 ? 0.0 : s;  // no negative zero
}

inline double cross(const RatePair& o, const RatePair& a, const RatePair& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

// Andrew's monotone chain; drops collinear and duplicate points.
inline std::vector<RatePair> monotone_chain(std::vector<RatePair> pts) {
    std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    auto turns_left = [](const RatePair& o, const RatePair& a, const RatePair& b) {
        const double la = std::hypot(a.r1 - o.r1, a.r2 - o.r2);
        const double lb = std::hypot(b.r1 - o.r1, b.r2 - o.r2);
        return cross(o, a, b) > 1e-13 * la * lb;
    };

    std::vector<RatePair> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], p)) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && !turns_left(hull[k - 2], hull[k - 1], pts[i])) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

class RateRegion {
public:
    /// The trivial region {(0, 0)}.
    RateRegion() : v_{{0.0, 0.0}} {}

    /// Smallest convex, downward-closed region containing every point.
    static RateRegion from_points(std::span<const RatePair> points) {
        std::vector<RatePair> pts;
        pts.reserve(points.size() + 3);
        double a = 0.0, b = 0.0;
        for (const auto& p : points) {
            if (!std::isfinite(p.r1) || !std::isfinite(p.r2))
                throw InvalidParameter("rate pair must be finite");
            if (p.r1 < -kSnap || p.r2 < -kSnap)
                throw InvalidParameter("rate pair must be non-negative");
            RatePair s{detail::snap(std::max(p.r1, 0.0)), detail::snap(std::max(p.r2, 0.0))};
            a = std::max(a, s.r1);
            b = std::max(b, s.r2);
            pts.push_back(s);
        }
        pts.push_back({0.0, 0.0});
        pts.push_back({a, 0.0});
        pts.push_back({0.0, b});
        RateRegion r;
        r.v_ = detail::monotone_chain(std::move(pts));
        return r;
    }

    std::span<const RatePair> vertices() const noexcept { return v_; }

    double r1_max() const noexcept {
        double a = 0.0;
        for (const auto& p : v_) a = std::max(a, p.r1);
        return a;
    }
    double r2_max() const noexcept {
        double b = 0.0;
        for (const auto& p : v_) b = std::max(b, p.r2);
        return b;
    }

    /// Pareto-relevant boundary from the R2 intercept down to the R1 intercept
    /// (every vertex except the origin, ordered by increasing R1).
    std::vector<RatePair> frontier() const {
        if (v_.size() == 1) return v_;
        std::vector<RatePair> f(v_.rbegin(), v_.rend() - 1);
        return f;
    }

    friend bool operator==(const RateRegion&, const RateRegion&) = default;

private:
    std::vector<RatePair> v_;
};

inline void validate(const PentagonSpec& s) {
    constexpr double slack = 1e-12;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(s.r1_max) || !finite(s.r2_max) || !finite(s.r12_max))
        throw InvalidParameter("pentagon caps must be finite");
    if (s.r1_max < 0.0 || s.r2_max < 0.0)
        throw InvalidParameter("pentagon caps must be non-negative");
    const double scale = 1.0 + s.r1_max + s.r2_max;
    if (s.r12_max < std::max(s.r1_max, s.r2_max) - slack * scale ||
        s.r12_max > s.r1_max + s.r2_max + slack * scale)
        throw InvalidParameter("sum cap must lie in [max(r1, r2), r1 + r2]");
}

/// MAC pentagon with SIC corners (r1, r12 - r1) and (r12 - r2, r2).
inline RateRegion pentagon(const PentagonSpec& s) {
    validate(s);
    const double r12 = std::clamp(s.r12_max, std::max(s.r1_max, s.r2_max), s.r1_max + s.r2_max);
    const RatePair pts[] = {
        {s.r1_max, r12 - s.r1_max},
        {r12 - s.r2_max, s.r2_max},
    };
    return RateRegion::from_points(pts);
}

inline RateRegion hull_union(std::span<const RateRegion> regions) {
    if (regions.empty()) throw InvalidParameter("hull_union needs at least one region");
    std::vector<RatePair> pts;
    for (const auto& r : regions) pts.insert(pts.end(), r.vertices().begin(), r.vertices().end());
    return RateRegion::from_points(pts);
}

inline RateRegion time_share(const RateRegion& a, const RateRegion& b) {
    const RateRegion both[] = {a, b};
    return hull_union(both);
}

inline double support(const RateRegion& region, double theta) {
    constexpr double slack = 1e-12;
    if (!(theta >= -slack && theta <= std::numbers::pi / 2 + slack))
        throw InvalidParameter("support angle must lie in [0, pi/2]");
    const double c = std::cos(theta), s = std::sin(theta);
    double h = 0.0;
    for (const auto& p : region.vertices()) h = std::max(h, p.r1 * c + p.r2 * s);
    return h;
}

/// Equally spaced support angles on [0, pi/2], endpoints included.
inline std::vector<double> support_angles(std::size_t count = kSupportAngles) {
    if (count < 2) throw InvalidParameter("need at least two support angles");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = (std::numbers::pi / 2) * static_cast<double>(i) / static_cast<double>(count - 1);
    t.back() = std::numbers::pi / 2;
    return t;
}

inline std::vector<double> support_profile(const RateRegion& region,
                                           std::span<const double> angles) {
    std::vector<double> h;
    h.reserve(angles.size());
    for (double t : angles) h.push_back(support(region, t));
    return h;
}

namespace detail {

inline double segment_distance(const RatePair& a, const RatePair& b, const RatePair& p) {
    const double ex = b.r1 - a.r1, ey = b.r2 - a.r2;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p.r1 - a.r1) * ex + (p.r2 - a.r2) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.r1 - (a.r1 + t * ex), p.r2 - (a.r2 + t * ey));
}

// Signed distance of p to the left of the directed edge a -> b.
inline double edge_margin(const RatePair& a, const RatePair& b, const RatePair& p) {
    const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
    return cross(a, b, p) / len;
}

// Half-plane test of p against the polygon within tol, O(log m) via the
// fan of triangles rooted at the origin vertex.
inline bool point_within(std::span<const RatePair> poly, const RatePair& p, double tol) {
    const std::size_t m = poly.size();
    if (m == 1) return std::hypot(p.r1, p.r2) <= tol;
    if (m == 2) return segment_distance(poly[0], poly[1], p) <= tol;

    const RatePair o = poly[0];
    auto all_edges = [&] {
        for (std::size_t i = 0; i < m; ++i)
            if (edge_margin(poly[i], poly[(i + 1) % m], p) < -tol) return false;
        return true;
    };
    // Outside the fan's angular span: fall back to checking every edge.
    if (cross(o, poly[1], p) < 0.0 || cross(o, poly[m - 1], p) > 0.0) return all_edges();

    std::size_t lo = 1, hi = m - 1;  // invariant: p between rays o->poly[lo] and o->poly[hi]
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cross(o, poly[mid], p) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return edge_margin(poly[lo], poly[hi], p) >= -tol;
}

} // namespace detail

/// True when inner is contained in outer up to tol: support dominance on the
/// fixed angle grid and every inner vertex within tol of outer's hull.
inline bool contains(const RateRegion& outer, const RateRegion& inner, double tol = kContainTol) {
    if (!(tol >= 0.0)) throw InvalidParameter("containment tolerance must be >= 0");
    for (double t : support_angles()) {
        if (support(inner, t) > support(outer, t) + tol) return false;
    }
    const auto poly = outer.vertices();
    for (const auto& p : inner.vertices()) {
        if (!detail::point_within(poly, p, tol)) return false;
    }
    return true;
}

/// Region whose support function on the given angles is h: intersection of
/// the support half-planes with the first quadrant. Angles must be sorted
/// and span [0, pi/2].
inline RateRegion region_from_support(std::span<const double> angles, std::span<const double> h) {
    if (angles.size() != h.size() || angles.size() < 2)
        throw InvalidParameter("support samples and angles must match");
    std::vector<RatePair> pts;
    pts.push_back({std::max(h.front(), 0.0), 0.0});
    pts.push_back({0.0, std::max(h.back(), 0.0)});
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        const double c1 = std::cos(angles[i]), s1 = std::sin(angles[i]);
        const double c2 = std::cos(angles[i + 1]), s2 = std::sin(angles[i + 1]);
        const double det = c1 * s2 - s1 * c2;
        if (std::abs(det) < 1e-15) continue;
        RatePair v{(h[i] * s2 - h[i + 1] * s1) / det, (c1 * h[i + 1] - c2 * h[i]) / det};
        v.r1 = std::max(v.r1, 0.0);
        v.r2 = std::max(v.r2, 0.0);
        pts.push_back(v);
    }
    return RateRegion::from_points(pts);
}

/// Median over the support angles of (h_outer - h_inner) / h_outer, skipping
/// angles where the outer support vanishes.
inline double median_relative_support_gap(const RateRegion& outer, const RateRegion& inner) {
    std::vector<double> gaps;
    for (double t : support_angles()) {
        const double ho = support(outer, t);
        if (ho <= 0.0) continue;
        gaps.push_back((ho - support(inner, t)) / ho);
    }
    if (gaps.empty()) return 0.0;
    auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    if (gaps.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(gaps.begin(), mid);
    return 0.5 * (lower + upper);
}

} // namespace pass
