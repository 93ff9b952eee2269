#ifndef COURTPRIOR_RASTER_HPP
#define COURTPRIOR_RASTER_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "courtprior/errors.hpp"

namespace courtprior {

/// Integer pixel rectangle. Empty rects (w or h <= 0) are representable
/// and propagate as empty through intersection.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool empty() const { return w <= 0 || h <= 0; }
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return empty() ? 0 : static_cast<long long>(w) * h; }

  Rect intersect(const Rect& o) const {
    const int x0 = std::max(x, o.x);
    const int y0 = std::max(y, o.y);
    const int x1 = std::min(right(), o.right());
    const int y1 = std::min(bottom(), o.bottom());
    if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
    return Rect{x0, y0, x1 - x0, y1 - y0};
  }

  bool operator==(const Rect&) const = default;
};

/**
 * Owned 8-bit pixel grid, row-major interleaved samples, 1 (gray) or
 * 3 (RGB) channels. Treated as an immutable value once built; every
 * operation below returns a new Raster.
 */
class Raster {
public:
  Raster() = default;

  Raster(int width, int height, int channels, uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels),
        data_(checked_size(width, height, channels), fill) {}

  Raster(int width, int height, int channels, std::vector<uint8_t> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (data_.size() != checked_size(width, height, channels))
      throw DimensionMismatch("raster data length does not match width*height*channels");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  uint8_t at(int x, int y, int c = 0) const {
    check_coords(x, y, c);
    return data_[index(x, y, c)];
  }

  uint8_t& at(int x, int y, int c = 0) {
    check_coords(x, y, c);
    return data_[index(x, y, c)];
  }

  /// Unchecked row pointer for hot loops.
  const uint8_t* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_ * channels_; }
  uint8_t* row(int y) { return data_.data() + static_cast<size_t>(y) * width_ * channels_; }

  const std::vector<uint8_t>& data() const { return data_; }
  std::vector<uint8_t>& data() { return data_; }

  bool operator==(const Raster&) const = default;

private:
  static size_t checked_size(int w, int h, int c) {
    if (w <= 0 || h <= 0) throw DimensionMismatch("raster dimensions must be positive");
    if (c != 1 && c != 3) throw DimensionMismatch("raster must have 1 or 3 channels");
    return static_cast<size_t>(w) * h * c;
  }

  void check_coords(int x, int y, int c) const {
    if (x < 0 || x >= width_ || y < 0 || y >= height_ || c < 0 || c >= channels_)
      throw Error("raster access out of bounds");
  }

  size_t index(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<uint8_t> data_;
};

/// Row-major float image used by the normalization stage of the online chain.
struct FloatRaster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  float& at(int x, int y, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

/**
 * Decode a PNG or JPEG byte stream. Always returns a 3-channel RGB raster;
 * grayscale sources are channel-replicated, alpha is dropped.
 *
 * Throws UnsupportedFormat if the magic bytes are neither PNG nor JPEG,
 * MalformedImage on a truncated or invalid stream.
 */
Raster decode(std::span<const uint8_t> bytes);

/// Encode as PNG (8-bit, no interlacing; gray for 1-channel, RGB for 3).
std::vector<uint8_t> encode_png(const Raster& img);

/// Encode as baseline JPEG. 1-channel rasters are written as grayscale.
std::vector<uint8_t> encode_jpeg(const Raster& img, int quality = 90);

Raster load_image(const std::filesystem::path& path);
void save_png(const Raster& img, const std::filesystem::path& path);

/// Rec.601 luma: gray = round(0.299 R + 0.587 G + 0.114 B). Identity on
/// 1-channel input.
Raster to_gray(const Raster& img);

/**
 * Copy the intersection of r with the image bounds. Pixel (0,0) of the
 * output is pixel (max(r.x,0), max(r.y,0)) of the input. Throws EmptyCrop
 * when the intersection is empty.
 */
Raster crop(const Raster& img, const Rect& r);

/// Bilinear resize with half-pixel center alignment. Resizing to the
/// current size reproduces the input bit-exactly.
Raster resize(const Raster& img, int w, int h);

/// Mirror left-right: output (x, y) = input (width-1-x, y).
Raster hflip(const Raster& img);

} // namespace courtprior

#endif
