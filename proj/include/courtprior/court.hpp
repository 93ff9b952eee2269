#ifndef COURTPRIOR_COURT_HPP
#define COURTPRIOR_COURT_HPP

#include <map>
#include <string>
#include <vector>

#include "courtprior/cocodata.hpp"
#include "courtprior/edgelines.hpp"
#include "courtprior/geometry.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

/// Fixed image-fraction margins bounding every crop:
/// rows H/9 .. 8H/9, columns W/15 .. 14W/15.
struct StaticMargins {
  double min_h = 0.0;
  double max_h = 0.0;
  double min_w = 0.0;
  double max_w = 0.0;

  static StaticMargins for_image(int width, int height) {
    return {height / 9.0, 8.0 * height / 9.0, width / 15.0, 14.0 * width / 15.0};
  }
};

struct CourtDetectParams {
  double canny_sigma = 1.4;
  double canny_low = 50.0;
  double canny_high = 150.0;
  int hough_vote_threshold = 80;
  double hough_rho_resolution = 1.0;
  double hough_theta_resolution = 3.14159265358979323846 / 180.0;
  double hough_max_line_gap = 10.0;
  double hough_min_line_frac = 0.25; // min segment length as a fraction of min(W, H)
  double hough_sample_fraction = 1.0;
  uint64_t seed = 0;

  double band_area_fraction = 0.20;
  enum class BandMode { AreaFraction, LinearInset };
  BandMode band_mode = BandMode::AreaFraction;

  // Crop-formula reading: Clamped treats the third/fourth hull terms as
  // right/bottom coordinates; Verbatim treats them as width/height.
  enum class Formula { Clamped, Verbatim };
  Formula formula = Formula::Clamped;
  double headroom_px = 50.0; // subtracted from the top coordinate, floored at 0
};

struct CourtRegion {
  Polygon hull;               // maximum convex hull over segment endpoints
  Rect hull_bbox;
  Rect crop;                  // non-empty, within image bounds
  Polygon interior;           // hull shrunk so the band holds band_area_fraction
  double band_area_fraction = 0.20;
  bool fallback_used = false;
};

/**
 * Court crop rectangle from float hull bounds under the static margins:
 *
 *   left   = min(min_w, hull_left)
 *   top    = max(min_h, hull_top) - headroom, floored at 0
 *   right  = max(min_w, hull_right)       (Clamped reading)
 *   bottom = min(max_h, hull_bottom)
 *
 * Verbatim instead takes the third/fourth terms as width/height:
 * w = max(min_w, hull_w), h = min(max_h, hull_h). Each edge coordinate is
 * rounded to the nearest pixel and clamped to the image; an empty result
 * is returned as an empty Rect.
 */
Rect crop_from_hull_bounds(double hull_left, double hull_top, double hull_right,
                           double hull_bottom, int width, int height,
                           CourtDetectParams::Formula formula, double headroom_px);

/// Static-margin fallback crop: [round(W/15), round(H/9)] to
/// [round(14W/15), round(8H/9)].
Rect fallback_crop(int width, int height);

/**
 * Full court detection: Canny edges, Hough segments, convex hull of all
 * segment endpoints, crop formula under the static margins. Falls back to
 * the static-margin crop when fewer than 3 distinct endpoints are found
 * (or the hull degenerates). Throws ImageTooSmall below 64x64.
 */
CourtRegion detect_court(const Raster& img, const CourtDetectParams& params = {});

/// Per-(court, split) mean of crop area over image area.
struct CropStatRow {
  std::string court;
  std::string split;
  int images = 0;
  double mean_ratio = 0.0;
};

/// Groups by (court_label, split) in lexicographic order; ratios are
/// averaged in image-id order. Throws MissingRegion when an image in the
/// dataset has no region.
std::vector<CropStatRow> crop_area_report(const Dataset& ds,
                                          const std::map<int, CourtRegion>& regions);

std::string stats_to_csv(const std::vector<CropStatRow>& rows);
std::string stats_barchart(const std::vector<CropStatRow>& rows);

// ---- regions.json wire format ----

struct RegionRecord {
  int image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  CourtRegion region;

  RegionRecord(int id, std::string name, int w, int h, CourtRegion r)
      : image_id(id), file_name(std::move(name)), width(w), height(h), region(std::move(r)) {}
};

std::string serialize_regions(const std::vector<RegionRecord>& records);
std::vector<RegionRecord> parse_regions(const std::string& json_text);
std::vector<RegionRecord> load_regions(const std::filesystem::path& path);
void save_regions(const std::vector<RegionRecord>& records, const std::filesystem::path& path);

/// Translate a region into the frame of its own crop (used when images
/// are cropped to the court before augmentation).
CourtRegion shift_region_to_crop(const CourtRegion& region);

} // namespace courtprior

#endif
