#include "courtprior/onlineaug.hpp"

#include <cmath>

namespace courtprior {

using nlohmann::json;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

json AugmentTrace::to_json() const {
  json j;
  j["flip"] = flip;
  j["resize"] = json::array({resize_w, resize_h});
  j["crop"] = json::array({crop.x, crop.y, crop.w, crop.h});
  if (gridmask.applied) {
    j["gridmask"] = {{"d", gridmask.d},
                     {"dx", gridmask.offset_x},
                     {"dy", gridmask.offset_y},
                     {"theta_deg", gridmask.theta_deg}};
  } else {
    j["gridmask"] = nullptr;
  }
  j["mean"] = mean;
  j["std"] = stddev;
  return j;
}

AugmentTrace AugmentTrace::from_json(const json& j) {
  AugmentTrace t;
  t.flip = j.at("flip").get<bool>();
  t.resize_w = j.at("resize")[0].get<int>();
  t.resize_h = j.at("resize")[1].get<int>();
  const auto& c = j.at("crop");
  t.crop = Rect{c[0].get<int>(), c[1].get<int>(), c[2].get<int>(), c[3].get<int>()};
  if (j.contains("gridmask") && !j["gridmask"].is_null()) {
    const auto& g = j["gridmask"];
    t.gridmask = GridMaskDraw{true, g.at("d").get<int>(), g.at("dx").get<int>(),
                              g.at("dy").get<int>(), g.at("theta_deg").get<double>()};
  }
  if (j.contains("mean")) t.mean = j["mean"].get<std::array<double, 3>>();
  if (j.contains("std")) t.stddev = j["std"].get<std::array<double, 3>>();
  return t;
}

GridMaskDraw draw_gridmask(RngStream& rng, const GridMaskConfig& cfg) {
  GridMaskDraw d;
  d.applied = rng.bernoulli(cfg.apply_prob);
  d.d = static_cast<int>(rng.uniform_int(cfg.d_min, cfg.d_max));
  d.offset_x = static_cast<int>(rng.uniform_int(0, d.d - 1));
  d.offset_y = static_cast<int>(rng.uniform_int(0, d.d - 1));
  d.theta_deg = rng.uniform(-cfg.rotate_max_deg, cfg.rotate_max_deg);
  return d;
}

Mask gridmask_mask(int width, int height, const GridMaskDraw& draw, double ratio) {
  Mask m(width, height);
  if (!draw.applied || draw.d <= 0) return m;
  const double hole = (1.0 - ratio) * draw.d;
  const double theta = draw.theta_deg * kPi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cx = width / 2.0, cy = height / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double px = x + 0.5 - cx;
      const double py = y + 0.5 - cy;
      const double u = px * c + py * s + cx + draw.offset_x;
      const double v = -px * s + py * c + cy + draw.offset_y;
      const double mu = u - std::floor(u / draw.d) * draw.d;
      const double mv = v - std::floor(v / draw.d) * draw.d;
      if (mu < hole && mv < hole) m.set(x, y);
    }
  }
  return m;
}

std::pair<Raster, Mask> gridmask(const Raster& img, RngStream& rng, const GridMaskConfig& cfg) {
  const GridMaskDraw draw = draw_gridmask(rng, cfg);
  Mask m = gridmask_mask(img.width(), img.height(), draw, cfg.ratio);
  Raster out = img;
  const int ch = out.channels();
  for (int y = 0; y < out.height(); ++y) {
    uint8_t* row = out.row(y);
    for (int x = 0; x < out.width(); ++x) {
      if (!m.at(x, y)) continue;
      for (int k = 0; k < ch; ++k) row[x * ch + k] = 0;
    }
  }
  return {std::move(out), std::move(m)};
}

AugmentTrace draw_online_plan(RngStream& rng, const OnlineAugConfig& cfg) {
  if (cfg.resize_choices.empty()) throw ConfigError("online.resize_choices must not be empty");
  if (!(cfg.crop_area_fraction > 0.0) || cfg.crop_area_fraction > 1.0)
    throw ConfigError("online.crop_area_fraction must be in (0, 1]");

  AugmentTrace t;
  t.flip = rng.bernoulli(cfg.flip_prob);
  const auto choice = cfg.resize_choices[static_cast<size_t>(
      rng.uniform_int(0, static_cast<int64_t>(cfg.resize_choices.size()) - 1))];
  t.resize_w = choice.first;
  t.resize_h = choice.second;

  const double side = std::sqrt(cfg.crop_area_fraction);
  const int cw = std::max(1, static_cast<int>(std::floor(t.resize_w * side)));
  const int chh = std::max(1, static_cast<int>(std::floor(t.resize_h * side)));
  const int cx = static_cast<int>(rng.uniform_int(0, t.resize_w - cw));
  const int cy = static_cast<int>(rng.uniform_int(0, t.resize_h - chh));
  t.crop = Rect{cx, cy, cw, chh};

  t.gridmask = draw_gridmask(rng, cfg.gridmask);
  t.mean = cfg.normalize_mean;
  t.stddev = cfg.normalize_std;
  return t;
}

FloatRaster normalize(const Raster& img, const std::array<double, 3>& mean,
                      const std::array<double, 3>& stddev) {
  if (img.channels() != 3) throw DimensionMismatch("normalize expects an RGB raster");
  FloatRaster out{img.width(), img.height(), 3, {}};
  out.data.resize(static_cast<size_t>(img.width()) * img.height() * 3);
  size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* row = img.row(y);
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c, ++i)
        out.data[i] = static_cast<float>((row[3 * x + c] - mean[c]) / stddev[c]);
  }
  return out;
}

OnlineResult apply_online_trace(const Raster& img, Dataset sample, int image_id,
                                const AugmentTrace& trace, const OnlineAugConfig& cfg) {
  Raster work = img;
  if (trace.flip) {
    work = hflip(work);
    transform_hflip(sample, image_id);
  }
  if (trace.resize_w != work.width() || trace.resize_h != work.height()) {
    const double sx = static_cast<double>(trace.resize_w) / work.width();
    const double sy = static_cast<double>(trace.resize_h) / work.height();
    work = resize(work, trace.resize_w, trace.resize_h);
    transform_resize(sample, image_id, sx, sy);
  }
  work = crop(work, trace.crop);
  transform_crop(sample, image_id, trace.crop, cfg.min_visible_area);

  OnlineResult result{Raster{}, normalize(work, trace.mean, trace.stddev), std::move(sample),
                      trace, Mask{}};
  result.erased = gridmask_mask(work.width(), work.height(), trace.gridmask, cfg.gridmask.ratio);
  if (trace.gridmask.applied) {
    for (int y = 0; y < work.height(); ++y) {
      uint8_t* row = work.row(y);
      for (int x = 0; x < work.width(); ++x) {
        if (!result.erased.at(x, y)) continue;
        row[3 * x] = 0;
        row[3 * x + 1] = 0;
        row[3 * x + 2] = 0;
        for (int c = 0; c < 3; ++c) result.normalized.at(x, y, c) = 0.0f;
      }
    }
  }
  result.image = std::move(work);
  return result;
}

OnlineResult run_online(const Raster& img, Dataset sample, int image_id, RngStream& rng,
                        const OnlineAugConfig& cfg) {
  const AugmentTrace trace = draw_online_plan(rng, cfg);
  return apply_online_trace(img, std::move(sample), image_id, trace, cfg);
}

} // namespace courtprior
