#ifndef COURTPRIOR_ROI_HPP
#define COURTPRIOR_ROI_HPP

#include <string>
#include <vector>

#include "courtprior/cocodata.hpp"
#include "courtprior/court.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

/// Composite crop-then-scale mapping between an ROI raster and the
/// original frame. Forward: (x, y) -> ((x - crop.x) * sx, (y - crop.y) * sy).
struct RoiTransform {
  Rect crop;
  double scale_x = 1.0;
  double scale_y = 1.0;
  int original_w = 0;
  int original_h = 0;
  int roi_w = 0;
  int roi_h = 0;
};

/**
 * Crop to the court region, then downscale uniformly so the longer side
 * is at most max_side (never upscales). Propagates EmptyCrop.
 */
std::pair<Raster, RoiTransform> make_roi(const Raster& img, const CourtRegion& region,
                                         int max_side);

/// Detection interchange record (one JSONL line).
struct Detection {
  int image_id = 0;
  std::array<double, 4> bbox{0, 0, 0, 0};
  std::vector<std::vector<double>> segmentation;
  double score = 0.0;
  int category_id = 0;
};

/// Map a detection from ROI coordinates back into the original frame:
/// (x, y) -> (x / sx + crop.x, y / sy + crop.y); the score is untouched.
Detection map_back(const Detection& det, const RoiTransform& t);

/// Forward mapping of a point into ROI coordinates (used by tests).
Vec2 roi_forward(Vec2 p, const RoiTransform& t);

// ---- file formats ----

struct RoiRecord {
  int image_id = 0;
  std::string file_name;
  RoiTransform transform;
};

std::string serialize_roi_transforms(const std::vector<RoiRecord>& records);
std::vector<RoiRecord> parse_roi_transforms(const std::string& json_text);
std::vector<RoiRecord> load_roi_transforms(const std::filesystem::path& path);
void save_roi_transforms(const std::vector<RoiRecord>& records, const std::filesystem::path& path);

std::string detection_to_json_line(const Detection& det);
Detection detection_from_json_line(const std::string& line, size_t line_no);
std::vector<Detection> load_detections(const std::filesystem::path& path);
void save_detections(const std::vector<Detection>& dets, const std::filesystem::path& path);

} // namespace courtprior

#endif
