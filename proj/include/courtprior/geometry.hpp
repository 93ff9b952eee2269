#ifndef COURTPRIOR_GEOMETRY_HPP
#define COURTPRIOR_GEOMETRY_HPP

#include <vector>

#include "courtprior/errors.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/**
 * Simple polygon with vertices in counterclockwise order (positive signed
 * area under the shoelace convention). Construction normalizes orientation
 * and rejects fewer than 3 distinct vertices; consecutive duplicates are
 * merged.
 */
class Polygon {
public:
  explicit Polygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  size_t size() const { return vertices_.size(); }
  const Vec2& operator[](size_t i) const { return vertices_[i]; }

private:
  std::vector<Vec2> vertices_;
};

/// Shoelace signed area of a vertex ring (positive when counterclockwise).
double signed_area(const std::vector<Vec2>& ring);

double area(const Polygon& poly);

/// Area centroid.
Vec2 centroid(const Polygon& poly);

/**
 * Convex hull by monotone chain. Collinear boundary points are dropped;
 * the result is counterclockwise starting from the lowest-then-leftmost
 * vertex. Throws DegenerateInput for fewer than 3 distinct points or an
 * all-collinear set.
 */
Polygon convex_hull(const std::vector<Vec2>& points);

/// Euclidean distance from p to the polygon boundary.
double distance_to_boundary(const Polygon& poly, Vec2 p);

/// True iff p is strictly inside the ring by even-odd ray casting.
/// Points exactly on the boundary give an unspecified answer; pair with
/// distance_to_boundary when that matters.
bool inside(const Polygon& poly, Vec2 p);

/// True iff p is inside the polygon or within eps of its boundary.
bool contains(const Polygon& poly, Vec2 p, double eps = 1e-6);

/// True iff p is inside and at least margin away from the boundary.
bool contains_with_margin(const Polygon& poly, Vec2 p, double margin);

/**
 * Tight integer bounding box: x = floor(min x), y = floor(min y),
 * extending to ceil(max x) and ceil(max y).
 */
Rect bbox_of(const Polygon& poly);

/// Float bounding box as (min, max) corners.
std::pair<Vec2, Vec2> bounds_of(const Polygon& poly);

/**
 * Scale every vertex toward the area centroid: v -> c + factor * (v - c).
 * The result is similar to the input with area scaled by factor^2.
 * Throws InvalidFactor unless 0 < factor <= 1.
 */
Polygon shrink_toward_centroid(const Polygon& poly, double factor);

/// Sutherland-Hodgman clip of a vertex ring against an axis-aligned
/// rectangle [x0,x1]x[y0,y1]. May return fewer than 3 vertices (empty
/// or degenerate result) -- callers decide what that means.
std::vector<Vec2> clip_ring_to_rect(const std::vector<Vec2>& ring,
                                    double x0, double y0, double x1, double y1);

} // namespace courtprior

#endif
