#ifndef COURTPRIOR_ONLINEAUG_HPP
#define COURTPRIOR_ONLINEAUG_HPP

#include <array>
#include <utility>
#include <vector>

#include <json.hpp>

#include "courtprior/cocodata.hpp"
#include "courtprior/raster.hpp"
#include "courtprior/rng.hpp"

namespace courtprior {

struct GridMaskConfig {
  double ratio = 0.5;          // erased tile side is (1 - ratio) * d
  int d_min = 96;              // grid period range, inclusive
  int d_max = 224;
  double rotate_max_deg = 0.0;
  double apply_prob = 0.7;
};

/// Per-sample online chain: flip -> resize -> area-preserving crop ->
/// normalize -> GridMask.
struct OnlineAugConfig {
  double flip_prob = 0.5;
  std::vector<std::pair<int, int>> resize_choices = {{1400, 800}, {1400, 1200}};
  double crop_area_fraction = 0.70;
  std::array<double, 3> normalize_mean = {123.675, 116.28, 103.53};
  std::array<double, 3> normalize_std = {58.395, 57.12, 57.375};
  GridMaskConfig gridmask;
  double min_visible_area = 16.0; // annotation drop threshold at the crop step
};

struct GridMaskDraw {
  bool applied = false;
  int d = 0;
  int offset_x = 0;
  int offset_y = 0;
  double theta_deg = 0.0;
};

/// Record of every random decision of one online-chain run; replaying a
/// trace reproduces the output bit for bit.
struct AugmentTrace {
  bool flip = false;
  int resize_w = 0;
  int resize_h = 0;
  Rect crop;
  GridMaskDraw gridmask;
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};

  nlohmann::json to_json() const;
  static AugmentTrace from_json(const nlohmann::json& j);
};

GridMaskDraw draw_gridmask(RngStream& rng, const GridMaskConfig& cfg);

/// Erased-pixel mask for a draw: square holes of side (1-ratio)*d tiled
/// with period d, rotated by theta around the image center.
Mask gridmask_mask(int width, int height, const GridMaskDraw& draw, double ratio);

/// Standalone GridMask: returns the erased raster and the erased-pixel mask.
std::pair<Raster, Mask> gridmask(const Raster& img, RngStream& rng, const GridMaskConfig& cfg);

/// Draw all random decisions of the chain without touching pixels.
/// Draw order: flip, resize choice, crop position, gridmask.
AugmentTrace draw_online_plan(RngStream& rng, const OnlineAugConfig& cfg);

/// Normalization to a float raster: (v - mean[c]) / std[c].
FloatRaster normalize(const Raster& img, const std::array<double, 3>& mean,
                      const std::array<double, 3>& stddev);

struct OnlineResult {
  Raster image;          // post-geometry uint8 view with GridMask zeros applied
  FloatRaster normalized; // normalized floats, GridMask-erased samples at 0.0
  Dataset sample;        // transformed records (single image)
  AugmentTrace trace;
  Mask erased;           // GridMask erased-pixel mask (empty when not applied)
};

/**
 * Apply a recorded trace to a sample. `sample` must contain the image
 * record plus its annotations; annotations ride through every geometric
 * step. GridMask does not alter annotations.
 */
OnlineResult apply_online_trace(const Raster& img, Dataset sample, int image_id,
                                const AugmentTrace& trace, const OnlineAugConfig& cfg);

/// Draw a plan from rng and apply it.
OnlineResult run_online(const Raster& img, Dataset sample, int image_id, RngStream& rng,
                        const OnlineAugConfig& cfg);

} // namespace courtprior

#endif
