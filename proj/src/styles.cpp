#include "courtprior/styles.hpp"

#include <algorithm>
#include <cmath>

namespace courtprior {

uint8_t RgbCurve::apply(int channel, uint8_t value) const {
  const auto& c = control[channel];
  const double xs[5] = {0, 64, 128, 192, 255};
  const double ys[5] = {0, c[0], c[1], c[2], 255};
  int seg = 3;
  for (int i = 0; i < 4; ++i) {
    if (value < xs[i + 1]) {
      seg = i;
      break;
    }
  }
  const double t = (value - xs[seg]) / (xs[seg + 1] - xs[seg]);
  const double y = ys[seg] + t * (ys[seg + 1] - ys[seg]);
  return static_cast<uint8_t>(std::clamp<long>(std::lround(y), 0, 255));
}

bool RgbCurve::is_identity() const {
  for (int ch = 0; ch < 3; ++ch)
    if (control[ch] != std::array<double, 3>{64, 128, 192}) return false;
  return true;
}

RgbCurve sample_curve(RngStream& rng, double strength) {
  if (strength < 0.0 || strength > 1.0) throw InvalidFactor("curve strength must be in [0, 1]");
  RgbCurve curve = RgbCurve::identity();
  const double span = 96.0 * strength;
  for (int ch = 0; ch < 3; ++ch) {
    auto& c = curve.control[ch];
    for (int i = 0; i < 3; ++i)
      c[i] = std::clamp(c[i] + rng.uniform(-span, span), 0.0, 255.0);
    std::sort(c.begin(), c.end());
  }
  return curve;
}

namespace {

void check_mask(const Raster& img, const Mask& mask) {
  if (img.channels() != 3) throw DimensionMismatch("style transforms expect an RGB raster");
  if (mask.width != img.width() || mask.height != img.height())
    throw DimensionMismatch("mask dimensions do not match the image");
}

} // namespace

Raster apply_player_style(const Raster& img, const Mask& mask, const RgbCurve& curve) {
  check_mask(img, mask);
  Raster out = img;
  // Precomputed lookup keeps the per-pixel cost flat.
  uint8_t lut[3][256];
  for (int ch = 0; ch < 3; ++ch)
    for (int v = 0; v < 256; ++v) lut[ch][v] = curve.apply(ch, static_cast<uint8_t>(v));
  for (int y = 0; y < out.height(); ++y) {
    uint8_t* row = out.row(y);
    for (int x = 0; x < out.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (int ch = 0; ch < 3; ++ch) row[3 * x + ch] = lut[ch][row[3 * x + ch]];
    }
  }
  return out;
}

Raster apply_perimeter_style(const Raster& img, const Mask& mask, RngStream& rng,
                             double sp_density, double brightness) {
  check_mask(img, mask);
  if (sp_density < 0.0 || sp_density > 1.0)
    throw InvalidFactor("salt-and-pepper density must be in [0, 1]");
  Raster out = img;
  for (int y = 0; y < out.height(); ++y) {
    uint8_t* row = out.row(y);
    for (int x = 0; x < out.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (int ch = 0; ch < 3; ++ch) {
        const double v = row[3 * x + ch] * brightness;
        row[3 * x + ch] = static_cast<uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
      }
      if (rng.bernoulli(sp_density)) {
        const uint8_t v = rng.bernoulli(0.5) ? 255 : 0;
        row[3 * x] = v;
        row[3 * x + 1] = v;
        row[3 * x + 2] = v;
      }
    }
  }
  return out;
}

} // namespace courtprior
