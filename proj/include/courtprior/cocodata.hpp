#ifndef COURTPRIOR_COCODATA_HPP
#define COURTPRIOR_COCODATA_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "courtprior/geometry.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

/**
 * COCO-style instance segmentation data model (polygons only; RLE and
 * crowd annotations are rejected at parse time). Unknown JSON fields are
 * preserved opaquely per record and re-emitted on serialization.
 */

struct CategoryDef {
  int id = 0;
  std::string name;
  nlohmann::json extra = nlohmann::json::object();
};

struct ImageRecord {
  int id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::string split = "train";   // train | val | test
  std::string court_label;       // optional Fig-style grouping key
  nlohmann::json extra = nlohmann::json::object();
};

struct Annotation {
  int id = 0;
  int image_id = 0;
  int category_id = 0;
  std::array<double, 4> bbox{0, 0, 0, 0}; // x, y, w, h
  std::vector<std::vector<double>> segmentation; // flat [x1,y1,x2,y2,...] rings
  double area = 0.0;
  int iscrowd = 0;
  nlohmann::json extra = nlohmann::json::object();
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::vector<CategoryDef> categories;
  nlohmann::json extra = nlohmann::json::object();

  const ImageRecord* find_image(int id) const;
  ImageRecord* find_image(int id);
  std::string category_name(int id) const;
  int next_image_id() const;
  int next_annotation_id() const;
};

/// Per-pixel boolean mask over a (width x height) window.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
  size_t popcount() const;
  /// Tight bbox of set pixels in window coordinates; nullopt when empty.
  std::optional<Rect> tight_bbox() const;
};

/// Parse a COCO JSON document. Validates ids, reference integrity and the
/// polygon-only segmentation shape; throws SchemaError with the offending
/// JSON path or record id in the message.
Dataset parse_dataset(const std::string& json_text);
std::string serialize_dataset(const Dataset& ds);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Re-check id uniqueness and referential integrity (throws SchemaError).
void validate_dataset(const Dataset& ds);

std::vector<std::vector<Vec2>> segmentation_rings(const std::vector<std::vector<double>>& segmentation);

/**
 * Rasterize segmentation rings into a window with the even-odd rule at
 * pixel centers: window pixel (x, y) is set when the absolute point
 * (window.x + x + 0.5, window.y + y + 0.5) is inside.
 */
Mask rasterize(const std::vector<std::vector<double>>& segmentation, const Rect& window);

/// Full-frame convenience overload.
Mask rasterize(const Annotation& ann, int width, int height);

/**
 * Trace mask boundaries into polygon rings along the pixel lattice so
 * that rasterize(mask_to_polygons(m)) reproduces m exactly (holes become
 * separate rings under the even-odd rule). Coordinates are emitted with
 * the given offset added. Throws EmptyMask when no pixel is set.
 */
std::vector<std::vector<double>> mask_to_polygons(const Mask& m, double offset_x = 0.0,
                                                  double offset_y = 0.0);

/**
 * Crop an image record to r: polygons are clipped to the rect
 * (Sutherland-Hodgman) and translated by (-r.x, -r.y); annotations whose
 * remaining area falls below min_visible_area are dropped; clipped
 * annotations get bbox/area re-derived from the rasterized result while
 * fully-inside annotations are purely translated. Image dims become r.w x r.h.
 */
void transform_crop(Dataset& ds, int image_id, const Rect& r, double min_visible_area = 16.0);

/// Mirror an image record horizontally: x -> W - x.
void transform_hflip(Dataset& ds, int image_id);

/**
 * Scale an image record by (sx, sy). Vertices and bbox scale analytically;
 * for non-identity scales bbox and area are re-derived from the rasterized
 * transformed polygons so the annotation invariants stay exact. Annotations
 * that rasterize to nothing after scaling are dropped.
 */
void transform_resize(Dataset& ds, int image_id, double sx, double sy);

/// Recompute bbox + area of ann from its rasterized segmentation (frame W x H).
/// Returns false (annotation unusable) when the mask is empty.
bool retighten_annotation(Annotation& ann, int width, int height);

/**
 * Master annotation invariant: every polygon vertex within [0,W]x[0,H],
 * bbox tight to the rasterized segmentation within 1 px per side, area
 * within max(2%, 5 px^2) of the rasterized pixel count. Returns a
 * description of the first violation, or nullopt when consistent.
 */
std::optional<std::string> annotation_violation(const Dataset& ds, const Annotation& ann);

} // namespace courtprior

#endif
