#ifndef COURTPRIOR_SCANLINE_HPP
#define COURTPRIOR_SCANLINE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "courtprior/geometry.hpp"

namespace courtprior {

/**
 * Visit the horizontal pixel spans covered by the even-odd interior of a
 * set of vertex rings, sampling at pixel centers (a pixel (x, y) is inside
 * when the point (x+0.5, y+0.5) is). Spans are clipped to [0,w) x [0,h)
 * and emitted as emit(y, x_first, x_last) with an inclusive x range.
 *
 * Horizontal edges are skipped; vertical extents are treated half-open so
 * crossing counts stay consistent at shared vertices.
 */
template <typename Emit>
void scan_rings(std::span<const std::vector<Vec2>> rings, int w, int h, Emit&& emit) {
  double min_y = 1e300, max_y = -1e300;
  for (const auto& ring : rings) {
    for (const Vec2& v : ring) {
      min_y = std::min(min_y, v.y);
      max_y = std::max(max_y, v.y);
    }
  }
  if (min_y > max_y) return;
  const int y_begin = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int y_end = std::min(h - 1, static_cast<int>(std::ceil(max_y)));

  std::vector<double> xs;
  for (int y = y_begin; y <= y_end; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    for (const auto& ring : rings) {
      const size_t n = ring.size();
      if (n < 3) continue;
      for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = ring[j];
        const Vec2& b = ring[i];
        if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc)) {
          xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
        }
      }
    }
    if (xs.size() < 2) continue;
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel centers in [xs[k], xs[k+1]).
      int x0 = static_cast<int>(std::ceil(xs[k] - 0.5));
      int x1 = static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1;
      x0 = std::max(x0, 0);
      x1 = std::min(x1, w - 1);
      if (x0 <= x1) emit(y, x0, x1);
    }
  }
}

} // namespace courtprior

#endif
