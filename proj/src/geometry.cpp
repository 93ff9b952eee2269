#include "courtprior/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace courtprior {

namespace {

// Distance from p to segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) {
    const Vec2 d = p - a;
    return std::sqrt(dot(d, d));
  }
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const Vec2 proj = a + t * ab;
  const Vec2 d = p - proj;
  return std::sqrt(dot(d, d));
}

} // namespace

Polygon::Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  // Merge consecutive duplicates (including the wrap-around pair).
  std::vector<Vec2> cleaned;
  cleaned.reserve(vertices_.size());
  for (const Vec2& v : vertices_) {
    if (cleaned.empty() || !(cleaned.back() == v)) cleaned.push_back(v);
  }
  while (cleaned.size() > 1 && cleaned.front() == cleaned.back()) cleaned.pop_back();
  if (cleaned.size() < 3) throw DegenerateInput("polygon needs at least 3 distinct vertices");

  const double a = signed_area(cleaned);
  if (a == 0.0) throw DegenerateInput("polygon vertices are collinear");
  if (a < 0.0) std::reverse(cleaned.begin(), cleaned.end());
  vertices_ = std::move(cleaned);
}

double signed_area(const std::vector<Vec2>& ring) {
  double s = 0.0;
  const size_t n = ring.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

double area(const Polygon& poly) { return signed_area(poly.vertices()); }

Vec2 centroid(const Polygon& poly) {
  const auto& v = poly.vertices();
  const size_t n = v.size();
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    const double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

Polygon convex_hull(const std::vector<Vec2>& points) {
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateInput("convex hull needs at least 3 distinct points");

  const size_t n = pts.size();
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  // Lower chain, then upper chain; strict turns drop collinear points.
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateInput("input points are collinear");

  // Rotate so the first vertex is the lowest, ties broken to the left.
  const auto start = std::min_element(hull.begin(), hull.end(), [](Vec2 a, Vec2 b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  std::rotate(hull.begin(), start, hull.end());
  return Polygon(std::move(hull));
}

double distance_to_boundary(const Polygon& poly, Vec2 p) {
  const auto& v = poly.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, segment_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

bool inside(const Polygon& poly, Vec2 p) {
  const auto& v = poly.vertices();
  bool in = false;
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const bool straddles = (v[i].y > p.y) != (v[j].y > p.y);
    if (straddles) {
      const double x_at =
          v[i].x + (p.y - v[i].y) / (v[j].y - v[i].y) * (v[j].x - v[i].x);
      if (p.x < x_at) in = !in;
    }
  }
  return in;
}

bool contains(const Polygon& poly, Vec2 p, double eps) {
  if (distance_to_boundary(poly, p) <= eps) return true;
  return inside(poly, p);
}

bool contains_with_margin(const Polygon& poly, Vec2 p, double margin) {
  return inside(poly, p) && distance_to_boundary(poly, p) >= margin;
}

Rect bbox_of(const Polygon& poly) {
  const auto [lo, hi] = bounds_of(poly);
  const int x = static_cast<int>(std::floor(lo.x));
  const int y = static_cast<int>(std::floor(lo.y));
  const int r = static_cast<int>(std::ceil(hi.x));
  const int b = static_cast<int>(std::ceil(hi.y));
  return Rect{x, y, r - x, b - y};
}

std::pair<Vec2, Vec2> bounds_of(const Polygon& poly) {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& v : poly.vertices()) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

Polygon shrink_toward_centroid(const Polygon& poly, double factor) {
  if (!(factor > 0.0) || factor > 1.0)
    throw InvalidFactor("shrink factor must be in (0, 1]");
  const Vec2 c = centroid(poly);
  std::vector<Vec2> out;
  out.reserve(poly.size());
  for (const Vec2& v : poly.vertices()) out.push_back(c + factor * (v - c));
  return Polygon(std::move(out));
}

std::vector<Vec2> clip_ring_to_rect(const std::vector<Vec2>& ring,
                                    double x0, double y0, double x1, double y1) {
  // inside(v) per edge; edges processed left, right, top, bottom.
  struct Edge {
    int axis;     // 0 = x, 1 = y
    double value;
    int keep_sign; // +1 keeps coord >= value, -1 keeps coord <= value
  };
  const Edge edges[4] = {{0, x0, +1}, {0, x1, -1}, {1, y0, +1}, {1, y1, -1}};

  std::vector<Vec2> poly = ring;
  for (const Edge& e : edges) {
    if (poly.empty()) break;
    std::vector<Vec2> next;
    next.reserve(poly.size() + 4);
    const auto coord = [&](const Vec2& v) { return e.axis == 0 ? v.x : v.y; };
    const auto is_in = [&](const Vec2& v) {
      return e.keep_sign > 0 ? coord(v) >= e.value : coord(v) <= e.value;
    };
    const auto intersect = [&](const Vec2& a, const Vec2& b) {
      const double t = (e.value - coord(a)) / (coord(b) - coord(a));
      Vec2 p = a + t * (b - a);
      if (e.axis == 0) p.x = e.value; else p.y = e.value;
      return p;
    };
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec2& cur = poly[i];
      const Vec2& prev = poly[(i + poly.size() - 1) % poly.size()];
      if (is_in(cur)) {
        if (!is_in(prev)) next.push_back(intersect(prev, cur));
        next.push_back(cur);
      } else if (is_in(prev)) {
        next.push_back(intersect(prev, cur));
      }
    }
    poly = std::move(next);
  }
  return poly;
}

} // namespace courtprior
