#include "courtprior/court.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>

#include <json.hpp>

namespace courtprior {

using nlohmann::json;

namespace {

double interior_factor(double band_fraction, CourtDetectParams::BandMode mode) {
  if (!(band_fraction >= 0.0) || band_fraction >= 1.0)
    throw InvalidFactor("band fraction must be in [0, 1)");
  return mode == CourtDetectParams::BandMode::AreaFraction ? std::sqrt(1.0 - band_fraction)
                                                           : 1.0 - band_fraction;
}

Polygon rect_polygon(const Rect& r) {
  return Polygon({{static_cast<double>(r.x), static_cast<double>(r.y)},
                  {static_cast<double>(r.right()), static_cast<double>(r.y)},
                  {static_cast<double>(r.right()), static_cast<double>(r.bottom())},
                  {static_cast<double>(r.x), static_cast<double>(r.bottom())}});
}

CourtRegion fallback_region(int width, int height, double band_fraction,
                            CourtDetectParams::BandMode mode) {
  const Rect crop = fallback_crop(width, height);
  Polygon hull = rect_polygon(crop);
  Polygon interior = shrink_toward_centroid(hull, interior_factor(band_fraction, mode));
  return CourtRegion{std::move(hull), crop, crop, std::move(interior), band_fraction, true};
}

} // namespace

Rect fallback_crop(int width, int height) {
  const StaticMargins m = StaticMargins::for_image(width, height);
  const int left = static_cast<int>(std::llround(m.min_w));
  const int top = static_cast<int>(std::llround(m.min_h));
  const int right = static_cast<int>(std::llround(m.max_w));
  const int bottom = static_cast<int>(std::llround(m.max_h));
  return Rect{left, top, right - left, bottom - top};
}

Rect crop_from_hull_bounds(double hull_left, double hull_top, double hull_right,
                           double hull_bottom, int width, int height,
                           CourtDetectParams::Formula formula, double headroom_px) {
  const StaticMargins m = StaticMargins::for_image(width, height);

  double left, top, right, bottom;
  if (formula == CourtDetectParams::Formula::Clamped) {
    left = std::min(m.min_w, hull_left);
    top = std::max(0.0, std::max(m.min_h, hull_top) - headroom_px);
    right = std::max(m.min_w, hull_right);
    bottom = std::min(m.max_h, hull_bottom);
  } else {
    const double x = std::min(m.min_w, hull_left);
    const double y = std::max(0.0, std::max(m.min_h, hull_top) - headroom_px);
    const double w = std::max(m.min_w, hull_right - hull_left);
    const double h = std::min(m.max_h, hull_bottom - hull_top);
    left = x;
    top = y;
    right = x + w;
    bottom = y + h;
  }

  int li = std::clamp(static_cast<int>(std::llround(left)), 0, width);
  int ti = std::clamp(static_cast<int>(std::llround(top)), 0, height);
  int ri = std::clamp(static_cast<int>(std::llround(right)), 0, width);
  int bi = std::clamp(static_cast<int>(std::llround(bottom)), 0, height);
  if (ri <= li || bi <= ti) return Rect{li, ti, 0, 0};
  return Rect{li, ti, ri - li, bi - ti};
}

CourtRegion detect_court(const Raster& img, const CourtDetectParams& p) {
  const int W = img.width();
  const int H = img.height();
  if (std::min(W, H) < 64) throw ImageTooSmall("detect_court requires at least 64x64");

  const Raster gray = to_gray(img);
  const EdgeMap edges = canny(gray, p.canny_low, p.canny_high, p.canny_sigma);

  HoughParams hp;
  hp.rho_resolution = p.hough_rho_resolution;
  hp.theta_resolution = p.hough_theta_resolution;
  hp.vote_threshold = p.hough_vote_threshold;
  hp.min_line_length = p.hough_min_line_frac * std::min(W, H);
  hp.max_line_gap = p.hough_max_line_gap;
  hp.sample_fraction = p.hough_sample_fraction;
  hp.sample_seed = p.seed;
  const std::vector<LineSegment> segments = hough_segments(edges, hp);

  std::vector<Vec2> endpoints;
  endpoints.reserve(segments.size() * 2);
  std::set<std::pair<int, int>> distinct;
  for (const LineSegment& s : segments) {
    endpoints.push_back({static_cast<double>(s.x0), static_cast<double>(s.y0)});
    endpoints.push_back({static_cast<double>(s.x1), static_cast<double>(s.y1)});
    distinct.insert({s.x0, s.y0});
    distinct.insert({s.x1, s.y1});
  }
  if (distinct.size() < 3) return fallback_region(W, H, p.band_area_fraction, p.band_mode);

  std::optional<Polygon> maybe_hull;
  try {
    maybe_hull.emplace(convex_hull(endpoints));
  } catch (const DegenerateInput&) {
    // All endpoints collinear.
  }
  if (!maybe_hull) return fallback_region(W, H, p.band_area_fraction, p.band_mode);
  Polygon hull = std::move(*maybe_hull);

  const auto [lo, hi] = bounds_of(hull);
  const Rect crop =
      crop_from_hull_bounds(lo.x, lo.y, hi.x, hi.y, W, H, p.formula, p.headroom_px);
  if (crop.empty()) return fallback_region(W, H, p.band_area_fraction, p.band_mode);

  Polygon interior =
      shrink_toward_centroid(hull, interior_factor(p.band_area_fraction, p.band_mode));
  const Rect hull_bbox = bbox_of(hull);
  return CourtRegion{std::move(hull), hull_bbox, crop, std::move(interior),
                     p.band_area_fraction, false};
}

std::vector<CropStatRow> crop_area_report(const Dataset& ds,
                                          const std::map<int, CourtRegion>& regions) {
  struct Group {
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;

  // Image-id order keeps the summation deterministic.
  std::vector<const ImageRecord*> imgs;
  imgs.reserve(ds.images.size());
  for (const auto& im : ds.images) imgs.push_back(&im);
  std::sort(imgs.begin(), imgs.end(),
            [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });

  for (const ImageRecord* im : imgs) {
    const auto it = regions.find(im->id);
    if (it == regions.end())
      throw MissingRegion("no region for image " + std::to_string(im->id));
    const Rect& crop = it->second.crop;
    const double ratio = static_cast<double>(crop.area()) /
                         (static_cast<double>(im->width) * im->height);
    const std::string court = im->court_label.empty() ? "unknown" : im->court_label;
    Group& g = groups[{court, im->split}];
    g.sum += ratio;
    g.count += 1;
  }

  std::vector<CropStatRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, g] : groups)
    rows.push_back({key.first, key.second, g.count, g.sum / g.count});
  return rows;
}

std::string stats_to_csv(const std::vector<CropStatRow>& rows) {
  std::string out = "court,split,images,mean_crop_ratio,mean_reduction\n";
  char buf[160];
  for (const CropStatRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.17g,%.17g\n", r.court.c_str(),
                  r.split.c_str(), r.images, r.mean_ratio, 1.0 - r.mean_ratio);
    out += buf;
  }
  return out;
}

std::string stats_barchart(const std::vector<CropStatRow>& rows) {
  std::string out;
  size_t label_w = 0;
  for (const CropStatRow& r : rows)
    label_w = std::max(label_w, r.court.size() + r.split.size() + 1);
  char buf[256];
  for (const CropStatRow& r : rows) {
    const std::string label = r.court + "/" + r.split;
    const int bar = static_cast<int>(std::lround(r.mean_ratio * 40.0));
    std::snprintf(buf, sizeof(buf), "%-*s |%-40s| %5.1f%% of frame (n=%d)\n",
                  static_cast<int>(label_w), label.c_str(),
                  std::string(static_cast<size_t>(std::clamp(bar, 0, 40)), '#').c_str(),
                  r.mean_ratio * 100.0, r.images);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// regions.json

namespace {

json polygon_to_json(const Polygon& poly) {
  json arr = json::array();
  for (const Vec2& v : poly.vertices()) arr.push_back(json::array({v.x, v.y}));
  return arr;
}

Polygon polygon_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.size() < 3)
    throw SchemaError(path + ": expected an array of at least 3 points");
  std::vector<Vec2> pts;
  pts.reserve(arr.size());
  for (const json& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw SchemaError(path + ": expected [x, y] pairs");
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return Polygon(std::move(pts));
}

Rect rect_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.size() != 4)
    throw SchemaError(path + ": expected [x, y, w, h]");
  return Rect{arr[0].get<int>(), arr[1].get<int>(), arr[2].get<int>(), arr[3].get<int>()};
}

} // namespace

std::string serialize_regions(const std::vector<RegionRecord>& records) {
  json arr = json::array();
  for (const RegionRecord& r : records) {
    json j;
    j["image_id"] = r.image_id;
    j["file_name"] = r.file_name;
    j["width"] = r.width;
    j["height"] = r.height;
    j["hull"] = polygon_to_json(r.region.hull);
    j["interior"] = polygon_to_json(r.region.interior);
    j["crop"] = json::array({r.region.crop.x, r.region.crop.y, r.region.crop.w, r.region.crop.h});
    j["band_area_fraction"] = r.region.band_area_fraction;
    j["fallback"] = r.region.fallback_used;
    arr.push_back(std::move(j));
  }
  return arr.dump(1);
}

std::vector<RegionRecord> parse_regions(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid regions JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("$: regions file must be a JSON array");
  std::vector<RegionRecord> out;
  size_t idx = 0;
  for (const json& j : doc) {
    const std::string path = "$[" + std::to_string(idx++) + "]";
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    for (const char* k : {"image_id", "hull", "interior", "crop", "fallback"})
      if (!j.contains(k)) throw SchemaError(path + ": missing required field '" + k + "'");
    Polygon hull = polygon_from_json(j["hull"], path + ".hull");
    Polygon interior = polygon_from_json(j["interior"], path + ".interior");
    const Rect crop = rect_from_json(j["crop"], path + ".crop");
    const Rect hull_bbox = bbox_of(hull);
    CourtRegion region{std::move(hull), hull_bbox, crop, std::move(interior),
                       j.value("band_area_fraction", 0.20), j["fallback"].get<bool>()};
    out.emplace_back(j["image_id"].get<int>(), j.value("file_name", std::string{}),
                     j.value("width", 0), j.value("height", 0), std::move(region));
  }
  return out;
}

std::vector<RegionRecord> load_regions(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open regions file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return parse_regions(text);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_regions(const std::vector<RegionRecord>& records, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f << serialize_regions(records);
  if (!f) throw IoError("short write to " + path.string());
}

CourtRegion shift_region_to_crop(const CourtRegion& region) {
  const double dx = region.crop.x;
  const double dy = region.crop.y;
  const auto shift = [&](const Polygon& poly) {
    std::vector<Vec2> pts;
    pts.reserve(poly.size());
    for (const Vec2& v : poly.vertices()) pts.push_back({v.x - dx, v.y - dy});
    return Polygon(std::move(pts));
  };
  Polygon hull = shift(region.hull);
  Rect hull_bbox = region.hull_bbox;
  hull_bbox.x -= region.crop.x;
  hull_bbox.y -= region.crop.y;
  return CourtRegion{std::move(hull), hull_bbox, Rect{0, 0, region.crop.w, region.crop.h},
                     shift(region.interior), region.band_area_fraction, region.fallback_used};
}

} // namespace courtprior
