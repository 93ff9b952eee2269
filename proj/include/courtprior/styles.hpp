#ifndef COURTPRIOR_STYLES_HPP
#define COURTPRIOR_STYLES_HPP

#include <array>

#include "courtprior/cocodata.hpp"
#include "courtprior/raster.hpp"
#include "courtprior/rng.hpp"

namespace courtprior {

/**
 * Per-channel tone curve through the fixed endpoints (0,0) and (255,255)
 * with movable control points at x = 64, 128, 192. Control values are
 * monotone non-decreasing per channel; evaluation is piecewise linear.
 */
struct RgbCurve {
  // control[channel] = {y at 64, y at 128, y at 192}
  std::array<std::array<double, 3>, 3> control;

  static RgbCurve identity() {
    RgbCurve c;
    c.control = {{{64, 128, 192}, {64, 128, 192}, {64, 128, 192}}};
    return c;
  }

  uint8_t apply(int channel, uint8_t value) const;
  bool is_identity() const;
};

/**
 * Draw a random curve: each control value is uniform within
 * +- 96 * strength of its identity value, clamped to [0, 255] and sorted
 * to stay monotone. Strength 0 returns the identity curve exactly.
 */
RgbCurve sample_curve(RngStream& rng, double strength);

/// Remap the masked pixels of an RGB raster through the curve; pixels
/// outside the mask are bit-identical. Throws DimensionMismatch when the
/// mask and image disagree.
Raster apply_player_style(const Raster& img, const Mask& mask, const RgbCurve& curve);

/**
 * Brightness scale plus salt-and-pepper noise on the masked pixels only.
 * A Bernoulli(sp_density) subset of masked pixels is driven to pure black
 * or pure white (fair coin, all channels jointly); the rest are scaled by
 * the brightness factor and clamped.
 */
Raster apply_perimeter_style(const Raster& img, const Mask& mask, RngStream& rng,
                             double sp_density, double brightness);

} // namespace courtprior

#endif
