#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "courtprior/geometry.hpp"
#include "courtprior/rng.hpp"
#include "oracles.hpp"

using namespace courtprior;

namespace {

std::vector<Vec2> random_points(RngStream& rng, int n, double lo, double hi) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
  return pts;
}

Polygon unit_square() {
  return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("polygon enforces ccw orientation") {
  const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(signed_area(cw.vertices()) > 0.0);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}}), DegenerateInput);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {2, 2}}), DegenerateInput);
}

TEST_CASE("hull of square corners plus center drops the center") {
  const Polygon hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  CHECK(hull.size() == 4);
  for (const Vec2& v : hull.vertices()) {
    CHECK((v.x == 0.0 || v.x == 1.0));
    CHECK((v.y == 0.0 || v.y == 1.0));
  }
}

TEST_CASE("hull of a triangle is the triangle") {
  const Polygon hull = convex_hull({{0, 0}, {4, 1}, {1, 3}});
  CHECK(hull.size() == 3);
}

TEST_CASE("hull rejects degenerate input") {
  CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}}), DegenerateInput);
  CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateInput);
  CHECK_THROWS_AS(convex_hull({{1, 1}, {1, 1}, {1, 1}}), DegenerateInput);
}

TEST_CASE("hull contains every input point") {
  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 100, 0.0, 1.0);
    const Polygon hull = convex_hull(pts);
    for (const Vec2& p : pts) CHECK(contains(hull, p, 1e-9));
  }
}

TEST_CASE("hull is idempotent and permutation invariant") {
  RngStream rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    auto pts = random_points(rng, 40, -5.0, 5.0);
    const Polygon h1 = convex_hull(pts);
    const Polygon h2 = convex_hull(h1.vertices());
    CHECK(h1.vertices() == h2.vertices());

    std::reverse(pts.begin(), pts.end());
    pts.push_back(pts.front()); // duplicate a point
    const Polygon h3 = convex_hull(pts);
    CHECK(h1.vertices() == h3.vertices());
  }
}

TEST_CASE("hull starts at lowest-then-leftmost vertex and is ccw") {
  RngStream rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Polygon hull = convex_hull(random_points(rng, 30, 0.0, 10.0));
    const auto& v = hull.vertices();
    for (const Vec2& p : v) {
      CHECK((v[0].y < p.y || (v[0].y == p.y && v[0].x <= p.x)));
    }
    CHECK(signed_area(v) > 0.0);
  }
}

TEST_CASE("hull edges match the all-pairs oracle") {
  RngStream rng(20);
  for (int trial = 0; trial < 25; ++trial) {
    const auto pts = random_points(rng, 24, 0.0, 100.0);
    const Polygon hull = convex_hull(pts);
    const auto edges = oracle::hull_edges(pts);

    // Every consecutive hull pair must be an oracle edge, and counts match.
    const auto& v = hull.vertices();
    const auto find_index = [&](Vec2 p) {
      for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == p) return static_cast<int>(i);
      return -1;
    };
    for (size_t i = 0; i < v.size(); ++i) {
      const int a = find_index(v[i]);
      const int b = find_index(v[(i + 1) % v.size()]);
      REQUIRE(a >= 0);
      REQUIRE(b >= 0);
      CHECK(edges.count({a, b}) == 1);
    }
    CHECK(edges.size() == v.size());
  }
}

TEST_CASE("contains on the unit square") {
  const Polygon sq = unit_square();
  CHECK(contains(sq, {0.5, 0.5}));
  CHECK_FALSE(contains(sq, {1.5, 0.5}));
  CHECK(contains(sq, {1.0 + 5e-7, 0.5}, 1e-6));
  CHECK_FALSE(contains(sq, {1.0 + 2e-6, 0.5}, 1e-6));
}

TEST_CASE("contains agrees with rasterized oracle away from the boundary") {
  RngStream rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Polygon hull = convex_hull(random_points(rng, 15, 0.0, 60.0));
    const oracle::RasterizedContainment oracle_grid(hull, 1.0);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
      const Vec2 p{rng.uniform(-5.0, 65.0), rng.uniform(-5.0, 65.0)};
      if (distance_to_boundary(hull, p) <= 1.0) continue; // oracle resolution
      ++compared;
      CHECK(contains(hull, p, 1e-9) == oracle_grid.lookup(p));
    }
    CHECK(compared > 100);
  }
}

TEST_CASE("bbox of a triangle") {
  const Rect r = bbox_of(Polygon({{0, 0}, {10, 0}, {5, 8}}));
  CHECK(r == Rect{0, 0, 10, 8});
}

TEST_CASE("bbox floors and ceils fractional bounds") {
  const Rect r = bbox_of(Polygon({{2.4, 2.4}, {7.6, 2.4}, {7.6, 7.6}, {2.4, 7.6}}));
  CHECK(r == Rect{2, 2, 6, 6});
}

TEST_CASE("shrink with factor 1 is the identity") {
  const Polygon sq = unit_square();
  const Polygon out = shrink_toward_centroid(sq, 1.0);
  CHECK(out.vertices() == sq.vertices());
}

TEST_CASE("shrink of centered square halves the corners") {
  const Polygon sq({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  const Polygon out = shrink_toward_centroid(sq, 0.5);
  for (const Vec2& v : out.vertices()) {
    CHECK(std::abs(std::abs(v.x) - 0.25) < 1e-12);
    CHECK(std::abs(std::abs(v.y) - 0.25) < 1e-12);
  }
}

TEST_CASE("shrink scales area by factor squared") {
  RngStream rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Polygon hull = convex_hull(random_points(rng, 12, 0.0, 20.0));
    const double f = rng.uniform(0.05, 1.0);
    const Polygon shrunk = shrink_toward_centroid(hull, f);
    CHECK(area(shrunk) == doctest::Approx(f * f * area(hull)).epsilon(1e-9));
    // Shrunken polygon sits inside the original.
    for (const Vec2& v : shrunk.vertices()) CHECK(contains(hull, v, 1e-9));
  }
}

TEST_CASE("shrink rejects factors outside (0, 1]") {
  const Polygon sq = unit_square();
  CHECK_THROWS_AS(shrink_toward_centroid(sq, 0.0), InvalidFactor);
  CHECK_THROWS_AS(shrink_toward_centroid(sq, -0.5), InvalidFactor);
  CHECK_THROWS_AS(shrink_toward_centroid(sq, 1.5), InvalidFactor);
}

TEST_CASE("clip ring against rect") {
  // 20x20 square half inside the clip window.
  const std::vector<Vec2> ring = {{-10, 0}, {10, 0}, {10, 20}, {-10, 20}};
  const auto out = clip_ring_to_rect(ring, 0, 0, 100, 100);
  REQUIRE(out.size() >= 3);
  CHECK(oracle::ring_area(out) == doctest::Approx(200.0));
  for (const Vec2& v : out) {
    CHECK(v.x >= 0.0);
    CHECK(v.x <= 100.0);
  }

  CHECK(clip_ring_to_rect(ring, 50, 50, 60, 60).empty());
}

} // TEST_SUITE
