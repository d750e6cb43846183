#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pass/region.hpp"

using namespace pass;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool has_vertex(const RateRegion& r, RatePair p, double tol = 1e-12) {
    for (const auto& v : r.vertices())
        if (std::abs(v.r1 - p.r1) <= tol && std::abs(v.r2 - p.r2) <= tol) return true;
    return false;
}

RateRegion random_region(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<RatePair> pts(8);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return RateRegion::from_points(pts);
}

// Brute-force support: max over a dense sample of the polygon boundary.
double support_by_edges(const RateRegion& r, double theta) {
    const auto v = r.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto a = v[i], b = v[(i + 1) % v.size()];
        for (int s = 0; s <= 100; ++s) {
            const double t = s / 100.0;
            best = std::max(best, (a.r1 + t * (b.r1 - a.r1)) * std::cos(theta) +
                                      (a.r2 + t * (b.r2 - a.r2)) * std::sin(theta));
        }
    }
    return best;
}

} // namespace

TEST_CASE("Region - pentagon corners") {
    const auto p = pentagon({1, 1, 1.5});
    CHECK(has_vertex(p, {1, 0.5}));
    CHECK(has_vertex(p, {0.5, 1}));
    CHECK(p.vertices().size() == 5);

    const auto rect = pentagon({1, 1, 2});
    CHECK(rect.vertices().size() == 4);
    CHECK(has_vertex(rect, {1, 1}));

    const auto seg = pentagon({1, 0, 1});
    CHECK(seg.vertices().size() == 2);
    CHECK(seg.r2_max() == 0.0);
    CHECK(seg.r1_max() == 1.0);
}

TEST_CASE("Region - pentagon spec validation") {
    REQUIRE_THROWS_AS(pentagon({1, 1, 0.5}), InvalidParameter);
    REQUIRE_THROWS_AS(pentagon({1, 1, 2.5}), InvalidParameter);
    REQUIRE_THROWS_AS(pentagon({-1, 1, 1}), InvalidParameter);
    REQUIRE_THROWS_AS(pentagon({NAN, 1, 1}), InvalidParameter);
}

TEST_CASE("Region - corners lie on the sum-rate line") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        const double s = std::max(a, b) + u(rng) / 5.0 * std::min(a, b);
        const auto r = pentagon({a, b, s});
        for (const auto& v : r.vertices()) CHECK(v.r1 + v.r2 <= s + 1e-11);
        CHECK_THAT(support(r, std::numbers::pi / 4) * std::sqrt(2.0), WithinAbs(s, 1e-11));
    }
}

TEST_CASE("Region - hull union examples") {
    const RatePair tri_pts[] = {{1, 0}, {0, 1}};
    const auto tri = RateRegion::from_points(tri_pts);
    const RateRegion dup[] = {tri, tri};
    CHECK(hull_union(dup) == tri);

    const RatePair ax1[] = {{1, 0}}, ax2[] = {{0, 1}};
    const RateRegion segs[] = {RateRegion::from_points(ax1), RateRegion::from_points(ax2)};
    CHECK(hull_union(segs) == tri);
    CHECK(time_share(segs[0], segs[1]) == tri);

    const auto outer = pentagon({1, 1, 1.5});
    const auto inner = pentagon({0.8, 0.8, 1.2});
    const RateRegion pair[] = {outer, inner};
    CHECK(hull_union(pair) == outer);
    CHECK(time_share(inner, outer) == outer);

    REQUIRE_THROWS_AS(hull_union(std::span<const RateRegion>{}), InvalidParameter);
}

TEST_CASE("Region - support values") {
    const auto sq = pentagon({1, 1, 2});
    CHECK_THAT(support(sq, 0.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(support(sq, std::numbers::pi / 4), WithinRel(std::sqrt(2.0), 1e-14));
    CHECK_THAT(support(pentagon({1, 1, 1.5}), std::numbers::pi / 4), WithinRel(1.5 / std::sqrt(2.0), 1e-14));
    CHECK_THAT(support(pentagon({1, 1, 1.5}), std::numbers::pi / 4), WithinRel(1.0607, 1e-4));
    REQUIRE_THROWS_AS(support(sq, -0.1), InvalidParameter);
    REQUIRE_THROWS_AS(support(sq, 2.0), InvalidParameter);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto r = random_region(rng);
        for (double t : support_angles(19)) CHECK_THAT(support(r, t), WithinAbs(support_by_edges(r, t), 1e-12));
    }
}

TEST_CASE("Region - containment examples") {
    CHECK(contains(pentagon({2, 2, 3}), pentagon({1, 1, 1.5})));
    CHECK_FALSE(contains(pentagon({1, 1, 1.5}), pentagon({2, 2, 3})));
    const auto p = pentagon({1, 0.7, 1.4});
    CHECK(contains(p, p, 0.0));
    // A point just outside the sum-rate edge is caught by the vertex test.
    const RatePair poke[] = {{0.7 + 1e-6, 0.7 + 1e-6}};
    CHECK_FALSE(contains(p, RateRegion::from_points(poke)));
    const RatePair inside[] = {{0.7, 0.7}};
    CHECK(contains(p, RateRegion::from_points(inside)));
    REQUIRE_THROWS_AS(contains(p, p, -1.0), InvalidParameter);
}

TEST_CASE("Region - containment on degenerate outer regions") {
    const RatePair seg_pts[] = {{1, 0}};
    const auto seg = RateRegion::from_points(seg_pts);
    const RatePair on[] = {{0.5, 0}}, off[] = {{0.5, 0.1}};
    CHECK(contains(seg, RateRegion::from_points(on)));
    CHECK_FALSE(contains(seg, RateRegion::from_points(off)));
    CHECK(contains(RateRegion{}, RateRegion{}));
    CHECK_FALSE(contains(RateRegion{}, seg));
}

TEST_CASE("Region - hull union algebra") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_region(rng), b = random_region(rng), c = random_region(rng);
        const RateRegion ab[] = {a, b}, ba[] = {b, a};
        const auto u = hull_union(ab);
        CHECK(u == hull_union(ba));
        const RateRegion left[] = {u, c};
        const RateRegion bc_[] = {b, c};
        const RateRegion right[] = {a, hull_union(bc_)};
        CHECK(hull_union(left) == hull_union(right));
        const RateRegion aa[] = {a, a};
        CHECK(hull_union(aa) == a);
        CHECK(contains(u, a, 0.0));
        CHECK(contains(u, b, 0.0));
        // transitivity and support monotonicity
        const RateRegion abc[] = {a, b, c};
        const auto big = hull_union(abc);
        CHECK(contains(big, u, 0.0));
        CHECK(contains(big, a, 0.0));
        for (double t : support_angles(31)) CHECK(support(a, t) <= support(big, t));
    }
}

TEST_CASE("Region - vertices are canonical") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto r = random_region(rng);
        const auto v = r.vertices();
        REQUIRE(v.front() == RatePair{0, 0});
        for (std::size_t k = 0; k < v.size(); ++k) {
            const auto& a = v[k];
            const auto& b = v[(k + 1) % v.size()];
            const auto& c = v[(k + 2) % v.size()];
            CHECK(detail::cross(a, b, c) > 0.0);  // strictly convex, counterclockwise
            CHECK(a.r1 >= 0.0);
            CHECK(a.r2 >= 0.0);
        }
        const auto f = r.frontier();
        CHECK(f.front().r1 == 0.0);
        CHECK(f.back().r2 == 0.0);
    }
    const RatePair jitter[] = {{1, 0}, {1 + 1e-14, 1e-14}, {0, 1}};
    CHECK(RateRegion::from_points(jitter).vertices().size() == 3);
    const RatePair negative[] = {{-1, 0}};
    REQUIRE_THROWS_AS(RateRegion::from_points(negative), InvalidParameter);
}

TEST_CASE("Region - symmetric time sharing") {
    const RatePair a_pts[] = {{2, 0.5}}, b_pts[] = {{0.5, 2}};
    const auto h = time_share(RateRegion::from_points(a_pts), RateRegion::from_points(b_pts));
    for (double t : support_angles(45))
        CHECK_THAT(support(h, t), WithinAbs(support(h, std::numbers::pi / 2 - t), 1e-12));
}

TEST_CASE("Region - reconstruction from support values") {
    std::mt19937_64 rng(13);
    const auto angles = support_angles();
    for (int i = 0; i < 30; ++i) {
        const auto a = random_region(rng), b = random_region(rng, 2.0);
        const auto ha = support_profile(a, angles), hb = support_profile(b, angles);
        std::vector<double> mean(angles.size());
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] = 0.5 * (ha[k] + hb[k]);
        const auto avg = region_from_support(angles, mean);
        // The rebuilt polygon reproduces the sampled support values.
        for (std::size_t k = 0; k < angles.size(); ++k)
            CHECK_THAT(support(avg, angles[k]), WithinAbs(mean[k], 1e-9));
        CHECK(contains(region_from_support(angles, hb), b, 1e-9));
    }
}

TEST_CASE("Region - median support gap") {
    CHECK(median_relative_support_gap(pentagon({1, 1, 1.5}), pentagon({1, 1, 1.5})) == 0.0);
    CHECK_THAT(median_relative_support_gap(pentagon({2, 2, 3}), pentagon({1, 1, 1.5})), WithinAbs(0.5, 1e-12));
}
