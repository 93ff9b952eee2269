#ifndef COURTPRIOR_EDGELINES_HPP
#define COURTPRIOR_EDGELINES_HPP

#include <cstdint>
#include <vector>

#include "courtprior/raster.hpp"

namespace courtprior {

/// Per-pixel boolean edge map with the source raster's dimensions.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> edges; // 0 or 1, row-major

  EdgeMap() = default;
  EdgeMap(int w, int h) : width(w), height(h), edges(static_cast<size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return edges[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) { edges[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
  size_t count() const;
};

struct HoughParams {
  double rho_resolution = 1.0;                 // pixels per rho bin
  double theta_resolution = 3.14159265358979323846 / 180.0; // radians per theta bin
  int vote_threshold = 80;
  double min_line_length = 0.0;                // pixels
  double max_line_gap = 10.0;                  // pixels
  // Fraction of edge pixels that vote. 1.0 is exhaustive; below 1.0 a
  // deterministic Bernoulli subset keyed by sample_seed votes instead.
  double sample_fraction = 1.0;
  uint64_t sample_seed = 0;
};

struct LineSegment {
  int x0 = 0, y0 = 0;
  int x1 = 0, y1 = 0;
  double length() const;
  bool operator==(const LineSegment&) const = default;
};

/**
 * Canny edge detector: Gaussian blur (kernel radius ceil(3*sigma),
 * replicated borders), 3x3 Sobel gradients, non-maximum suppression
 * quantized to four directions, then double-threshold hysteresis with
 * 8-connectivity. Thresholds are in raw Sobel magnitude units on 0-255
 * input (a full-contrast step peaks near 4*255 before blurring).
 *
 * Throws DimensionMismatch unless img has 1 channel, ImageTooSmall when
 * min(width, height) < 2*ceil(3*sigma)+1.
 */
EdgeMap canny(const Raster& img, double low_threshold, double high_threshold, double sigma);

/// (rho, theta) accumulator over edge pixels with rho = x cos(theta) + y sin(theta).
struct HoughAccumulator {
  int n_theta = 0;
  int n_rho = 0;
  double rho_resolution = 1.0;
  double theta_resolution = 0.0;
  double rho_offset = 0.0; // rho of bin 0
  std::vector<int> votes;  // n_theta * n_rho, theta-major

  int at(int theta_idx, int rho_idx) const {
    return votes[static_cast<size_t>(theta_idx) * n_rho + rho_idx];
  }
  double theta_of(int theta_idx) const { return theta_idx * theta_resolution; }
  double rho_of(int rho_idx) const { return rho_offset + rho_idx * rho_resolution; }
  /// Highest-vote cell as (theta_idx, rho_idx, votes); zeros when empty.
  struct Peak { int theta_idx = 0; int rho_idx = 0; int votes = 0; };
  Peak best() const;
};

HoughAccumulator hough_accumulate(const EdgeMap& edges, const HoughParams& params);

/**
 * Line-segment detection: vote the accumulator, then for every local-max
 * cell at or above vote_threshold walk the supporting edge pixels along
 * the line, splitting runs at gaps longer than max_line_gap and keeping
 * runs of at least min_line_length. Supporting pixels are consumed so a
 * line is reported once. Fully deterministic for a fixed seed.
 */
std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughParams& params);

} // namespace courtprior

#endif
