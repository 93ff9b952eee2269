#include "courtprior/cocodata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "courtprior/scanline.hpp"

namespace courtprior {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dataset helpers

const ImageRecord* Dataset::find_image(int id) const {
  for (const auto& im : images)
    if (im.id == id) return &im;
  return nullptr;
}

ImageRecord* Dataset::find_image(int id) {
  for (auto& im : images)
    if (im.id == id) return &im;
  return nullptr;
}

std::string Dataset::category_name(int id) const {
  for (const auto& c : categories)
    if (c.id == id) return c.name;
  return {};
}

int Dataset::next_image_id() const {
  int m = 0;
  for (const auto& im : images) m = std::max(m, im.id);
  return m + 1;
}

int Dataset::next_annotation_id() const {
  int m = 0;
  for (const auto& a : annotations) m = std::max(m, a.id);
  return m + 1;
}

size_t Mask::popcount() const {
  return static_cast<size_t>(std::count(bits.begin(), bits.end(), uint8_t{1}));
}

std::optional<Rect> Mask::tight_bbox() const {
  int min_x = width, min_y = height, max_x = -1, max_y = -1;
  for (int y = 0; y < height; ++y) {
    const uint8_t* row = bits.data() + static_cast<size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      if (!row[x]) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) return std::nullopt;
  return Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

// ---------------------------------------------------------------------------
// JSON (de)serialization

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path, std::string("missing required field '") + key + "'");
  return *it;
}

int get_int(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_number_integer()) schema_fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_fail(path, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require_field(obj, key, path);
  if (!v.is_string()) schema_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

json remaining_fields(const json& obj, std::initializer_list<const char*> known) {
  json extra = obj;
  for (const char* k : known) extra.erase(k);
  return extra;
}

} // namespace

Dataset parse_dataset(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$: expected a JSON object");

  Dataset ds;
  for (const char* key : {"images", "annotations", "categories"}) {
    if (!doc.contains(key) || !doc[key].is_array())
      schema_fail("$", std::string("missing or non-array field '") + key + "'");
  }

  size_t idx = 0;
  for (const json& jc : doc["categories"]) {
    const std::string path = "$.categories[" + std::to_string(idx++) + "]";
    if (!jc.is_object()) schema_fail(path, "expected an object");
    CategoryDef c;
    c.id = get_int(jc, "id", path);
    c.name = get_string(jc, "name", path);
    c.extra = remaining_fields(jc, {"id", "name"});
    ds.categories.push_back(std::move(c));
  }

  idx = 0;
  for (const json& ji : doc["images"]) {
    const std::string path = "$.images[" + std::to_string(idx++) + "]";
    if (!ji.is_object()) schema_fail(path, "expected an object");
    ImageRecord im;
    im.id = get_int(ji, "id", path);
    im.file_name = get_string(ji, "file_name", path);
    im.width = get_int(ji, "width", path);
    im.height = get_int(ji, "height", path);
    if (im.width <= 0 || im.height <= 0) schema_fail(path, "image dimensions must be positive");
    if (ji.contains("split")) {
      im.split = get_string(ji, "split", path);
      if (im.split != "train" && im.split != "val" && im.split != "test")
        schema_fail(path + ".split", "expected one of train/val/test, got '" + im.split + "'");
    }
    if (ji.contains("court_label")) im.court_label = get_string(ji, "court_label", path);
    im.extra = remaining_fields(ji, {"id", "file_name", "width", "height", "split", "court_label"});
    ds.images.push_back(std::move(im));
  }

  idx = 0;
  for (const json& ja : doc["annotations"]) {
    const std::string path = "$.annotations[" + std::to_string(idx++) + "]";
    if (!ja.is_object()) schema_fail(path, "expected an object");
    Annotation a;
    a.id = get_int(ja, "id", path);
    a.image_id = get_int(ja, "image_id", path);
    a.category_id = get_int(ja, "category_id", path);

    const json& jb = require_field(ja, "bbox", path);
    if (!jb.is_array() || jb.size() != 4) schema_fail(path + ".bbox", "expected [x, y, w, h]");
    for (size_t i = 0; i < 4; ++i) a.bbox[i] = get_number(jb[i], path + ".bbox");

    const json& js = require_field(ja, "segmentation", path);
    if (js.is_object())
      schema_fail(path + ".segmentation", "RLE segmentation is not supported (polygons only)");
    if (!js.is_array()) schema_fail(path + ".segmentation", "expected an array of polygons");
    for (size_t p = 0; p < js.size(); ++p) {
      const json& jp = js[p];
      const std::string ppath = path + ".segmentation[" + std::to_string(p) + "]";
      if (!jp.is_array()) schema_fail(ppath, "expected a flat coordinate array (RLE is not supported)");
      if (jp.size() < 6 || jp.size() % 2 != 0)
        schema_fail(ppath, "polygon needs an even count of at least 6 coordinates");
      std::vector<double> ring;
      ring.reserve(jp.size());
      for (const json& v : jp) ring.push_back(get_number(v, ppath));
      a.segmentation.push_back(std::move(ring));
    }

    a.area = get_number(require_field(ja, "area", path), path + ".area");
    if (ja.contains("iscrowd")) {
      a.iscrowd = get_int(ja, "iscrowd", path);
      if (a.iscrowd != 0) schema_fail(path + ".iscrowd", "crowd annotations are not supported");
    }
    a.extra = remaining_fields(ja, {"id", "image_id", "category_id", "bbox", "segmentation", "area", "iscrowd"});
    ds.annotations.push_back(std::move(a));
  }

  ds.extra = remaining_fields(doc, {"images", "annotations", "categories"});
  validate_dataset(ds);
  return ds;
}

void validate_dataset(const Dataset& ds) {
  std::unordered_set<int> image_ids, ann_ids, cat_ids;
  for (const auto& c : ds.categories) {
    if (!cat_ids.insert(c.id).second)
      throw SchemaError("duplicate category id " + std::to_string(c.id));
  }
  for (const auto& im : ds.images) {
    if (!image_ids.insert(im.id).second)
      throw SchemaError("duplicate image id " + std::to_string(im.id));
  }
  for (const auto& a : ds.annotations) {
    if (!ann_ids.insert(a.id).second)
      throw SchemaError("duplicate annotation id " + std::to_string(a.id));
    if (!image_ids.count(a.image_id))
      throw SchemaError("annotation " + std::to_string(a.id) + ": image_id " +
                        std::to_string(a.image_id) + " does not exist");
    if (!cat_ids.count(a.category_id))
      throw SchemaError("annotation " + std::to_string(a.id) + ": category_id " +
                        std::to_string(a.category_id) + " does not exist");
  }
}

std::string serialize_dataset(const Dataset& ds) {
  json doc = ds.extra;

  json jcats = json::array();
  for (const auto& c : ds.categories) {
    json j = c.extra;
    j["id"] = c.id;
    j["name"] = c.name;
    jcats.push_back(std::move(j));
  }
  json jimgs = json::array();
  for (const auto& im : ds.images) {
    json j = im.extra;
    j["id"] = im.id;
    j["file_name"] = im.file_name;
    j["width"] = im.width;
    j["height"] = im.height;
    j["split"] = im.split;
    if (!im.court_label.empty()) j["court_label"] = im.court_label;
    jimgs.push_back(std::move(j));
  }
  json janns = json::array();
  for (const auto& a : ds.annotations) {
    json j = a.extra;
    j["id"] = a.id;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    j["bbox"] = a.bbox;
    j["segmentation"] = a.segmentation;
    j["area"] = a.area;
    j["iscrowd"] = a.iscrowd;
    janns.push_back(std::move(j));
  }
  doc["categories"] = std::move(jcats);
  doc["images"] = std::move(jimgs);
  doc["annotations"] = std::move(janns);
  return doc.dump();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open dataset file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return parse_dataset(text);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f << serialize_dataset(ds);
  if (!f) throw IoError("short write to " + path.string());
}

// ---------------------------------------------------------------------------
// Rasterization

std::vector<std::vector<Vec2>> segmentation_rings(const std::vector<std::vector<double>>& segmentation) {
  std::vector<std::vector<Vec2>> rings;
  rings.reserve(segmentation.size());
  for (const auto& flat : segmentation) {
    std::vector<Vec2> ring;
    ring.reserve(flat.size() / 2);
    for (size_t i = 0; i + 1 < flat.size(); i += 2) ring.push_back({flat[i], flat[i + 1]});
    rings.push_back(std::move(ring));
  }
  return rings;
}

Mask rasterize(const std::vector<std::vector<double>>& segmentation, const Rect& window) {
  Mask m(std::max(window.w, 0), std::max(window.h, 0));
  if (window.empty()) return m;
  auto rings = segmentation_rings(segmentation);
  for (auto& ring : rings)
    for (Vec2& v : ring) {
      v.x -= window.x;
      v.y -= window.y;
    }
  scan_rings(std::span(rings), window.w, window.h, [&](int y, int x0, int x1) {
    uint8_t* row = m.bits.data() + static_cast<size_t>(y) * m.width;
    std::fill(row + x0, row + x1 + 1, uint8_t{1});
  });
  return m;
}

Mask rasterize(const Annotation& ann, int width, int height) {
  return rasterize(ann.segmentation, Rect{0, 0, width, height});
}

// ---------------------------------------------------------------------------
// Boundary tracing (mask -> polygons)
//
// Directed unit edges along the pixel lattice, one per set/unset crack.
// Every directed edge belongs to exactly one closed loop; saddle points
// are resolved with a fixed right-turn preference, which makes the
// decomposition deterministic and the even-odd rasterization of the
// result reproduce the mask exactly.

namespace {

enum Dir : uint8_t { E = 0, N = 1, W = 2, S = 3 };

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, -1, 0, 1};

inline Dir right_of(Dir d) {
  // y-down screen coordinates: E -> S -> W -> N -> E.
  static constexpr Dir table[4] = {S, E, N, W};
  return table[d];
}
inline Dir left_of(Dir d) {
  static constexpr Dir table[4] = {N, W, S, E};
  return table[d];
}

} // namespace

std::vector<std::vector<double>> mask_to_polygons(const Mask& m, double offset_x, double offset_y) {
  const int w = m.width;
  const int h = m.height;
  const auto px = [&](int x, int y) -> bool {
    if (x < 0 || x >= w || y < 0 || y >= h) return false;
    return m.at(x, y);
  };

  // Out-edge existence per lattice point, low 4 bits; visited in high bits.
  const int lw = w + 1;
  const int lh = h + 1;
  std::vector<uint8_t> flags(static_cast<size_t>(lw) * lh, 0);
  const auto point = [&](int x, int y) -> uint8_t& {
    return flags[static_cast<size_t>(y) * lw + x];
  };

  bool any = false;
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x <= w; ++x) {
      const bool a = px(x, y);           // SE of lattice point
      const bool b = px(x, y - 1);       // NE
      const bool c = px(x - 1, y - 1);   // NW
      const bool d = px(x - 1, y);       // SW
      uint8_t out = 0;
      if (a && !b) out |= 1u << E;
      if (b && !c) out |= 1u << N;
      if (c && !d) out |= 1u << W;
      if (d && !a) out |= 1u << S;
      point(x, y) = out;
      any = any || a;
    }
  }
  if (!any) throw EmptyMask("mask has no set pixels");

  std::vector<std::vector<double>> polygons;
  for (int sy = 0; sy <= h; ++sy) {
    for (int sx = 0; sx <= w; ++sx) {
      for (uint8_t sd = 0; sd < 4; ++sd) {
        const uint8_t bit = 1u << sd;
        const uint8_t vis = 1u << (sd + 4);
        if (!(point(sx, sy) & bit) || (point(sx, sy) & vis)) continue;

        // Walk one loop starting from (sx, sy) heading sd. Termination is
        // edge-based: a loop may legitimately pass through the same
        // lattice point twice (pinch at a saddle), so the walk only stops
        // when the pairing routes it back onto the starting edge. A
        // vertex is emitted at every direction change.
        const Dir start_dir = static_cast<Dir>(sd);
        std::vector<double> ring;
        int x = sx, y = sy;
        Dir dir = start_dir;
        while (true) {
          point(x, y) |= 1u << (dir + 4);
          const int nx2 = x + kDx[dir];
          const int ny2 = y + kDy[dir];
          const uint8_t outs = point(nx2, ny2);
          Dir next = dir;
          for (const Dir cand : {right_of(dir), dir, left_of(dir)}) {
            if (outs & (1u << cand)) {
              next = cand;
              break;
            }
          }
          if (nx2 == sx && ny2 == sy && next == start_dir) {
            if (dir != start_dir) {
              ring.push_back(nx2 + offset_x);
              ring.push_back(ny2 + offset_y);
            }
            break;
          }
          if (next != dir) {
            ring.push_back(nx2 + offset_x);
            ring.push_back(ny2 + offset_y);
          }
          x = nx2;
          y = ny2;
          dir = next;
        }
        if (ring.size() >= 6) polygons.push_back(std::move(ring));
      }
    }
  }
  return polygons;
}

// ---------------------------------------------------------------------------
// Annotation-geometry transforms

bool retighten_annotation(Annotation& ann, int width, int height) {
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const auto& ring : ann.segmentation) {
    for (size_t i = 0; i + 1 < ring.size(); i += 2) {
      min_x = std::min(min_x, ring[i]);
      max_x = std::max(max_x, ring[i]);
      min_y = std::min(min_y, ring[i + 1]);
      max_y = std::max(max_y, ring[i + 1]);
    }
  }
  if (min_x > max_x) return false;
  const Rect window = Rect{static_cast<int>(std::floor(min_x)), static_cast<int>(std::floor(min_y)),
                           static_cast<int>(std::ceil(max_x) - std::floor(min_x)) + 1,
                           static_cast<int>(std::ceil(max_y) - std::floor(min_y)) + 1}
                          .intersect(Rect{0, 0, width, height});
  if (window.empty()) return false;
  const Mask m = rasterize(ann.segmentation, window);
  const auto tb = m.tight_bbox();
  if (!tb) return false;
  ann.bbox = {static_cast<double>(window.x + tb->x), static_cast<double>(window.y + tb->y),
              static_cast<double>(tb->w), static_cast<double>(tb->h)};
  ann.area = static_cast<double>(m.popcount());
  return true;
}

void transform_crop(Dataset& ds, int image_id, const Rect& r, double min_visible_area) {
  ImageRecord* img = ds.find_image(image_id);
  if (!img) throw SchemaError("transform_crop: image " + std::to_string(image_id) + " not found");
  const Rect rc = r.intersect(Rect{0, 0, img->width, img->height});
  if (rc.empty()) throw EmptyCrop("crop rect does not intersect image " + std::to_string(image_id));

  const double x0 = rc.x, y0 = rc.y;
  const double x1 = rc.right(), y1 = rc.bottom();

  std::vector<Annotation> kept;
  kept.reserve(ds.annotations.size());
  for (Annotation& ann : ds.annotations) {
    if (ann.image_id != image_id) {
      kept.push_back(std::move(ann));
      continue;
    }
    bool fully_inside = true;
    for (const auto& ring : ann.segmentation) {
      for (size_t i = 0; i + 1 < ring.size() && fully_inside; i += 2) {
        if (ring[i] < x0 || ring[i] > x1 || ring[i + 1] < y0 || ring[i + 1] > y1)
          fully_inside = false;
      }
      if (!fully_inside) break;
    }

    if (fully_inside) {
      for (auto& ring : ann.segmentation)
        for (size_t i = 0; i + 1 < ring.size(); i += 2) {
          ring[i] -= x0;
          ring[i + 1] -= y0;
        }
      ann.bbox[0] -= x0;
      ann.bbox[1] -= y0;
      kept.push_back(std::move(ann));
      continue;
    }

    std::vector<std::vector<double>> clipped;
    for (const auto& ring : ann.segmentation) {
      std::vector<Vec2> verts;
      verts.reserve(ring.size() / 2);
      for (size_t i = 0; i + 1 < ring.size(); i += 2) verts.push_back({ring[i], ring[i + 1]});
      const auto out = clip_ring_to_rect(verts, x0, y0, x1, y1);
      if (out.size() < 3 || std::abs(signed_area(out)) < 1e-12) continue;
      std::vector<double> flat;
      flat.reserve(out.size() * 2);
      for (const Vec2& v : out) {
        flat.push_back(v.x - x0);
        flat.push_back(v.y - y0);
      }
      clipped.push_back(std::move(flat));
    }
    if (clipped.empty()) continue;
    ann.segmentation = std::move(clipped);
    if (!retighten_annotation(ann, rc.w, rc.h)) continue;
    if (ann.area < min_visible_area) continue;
    kept.push_back(std::move(ann));
  }
  ds.annotations = std::move(kept);
  img->width = rc.w;
  img->height = rc.h;
}

void transform_hflip(Dataset& ds, int image_id) {
  ImageRecord* img = ds.find_image(image_id);
  if (!img) throw SchemaError("transform_hflip: image " + std::to_string(image_id) + " not found");
  const double w = img->width;
  for (Annotation& ann : ds.annotations) {
    if (ann.image_id != image_id) continue;
    for (auto& ring : ann.segmentation)
      for (size_t i = 0; i + 1 < ring.size(); i += 2) ring[i] = w - ring[i];
    ann.bbox[0] = w - ann.bbox[0] - ann.bbox[2];
  }
}

void transform_resize(Dataset& ds, int image_id, double sx, double sy) {
  ImageRecord* img = ds.find_image(image_id);
  if (!img) throw SchemaError("transform_resize: image " + std::to_string(image_id) + " not found");
  if (!(sx > 0.0) || !(sy > 0.0)) throw Error("resize scale must be positive");
  if (sx == 1.0 && sy == 1.0) return;

  const int new_w = static_cast<int>(std::lround(img->width * sx));
  const int new_h = static_cast<int>(std::lround(img->height * sy));

  std::vector<Annotation> kept;
  kept.reserve(ds.annotations.size());
  for (Annotation& ann : ds.annotations) {
    if (ann.image_id != image_id) {
      kept.push_back(std::move(ann));
      continue;
    }
    for (auto& ring : ann.segmentation)
      for (size_t i = 0; i + 1 < ring.size(); i += 2) {
        ring[i] = std::clamp(ring[i] * sx, 0.0, static_cast<double>(new_w));
        ring[i + 1] = std::clamp(ring[i + 1] * sy, 0.0, static_cast<double>(new_h));
      }
    if (!retighten_annotation(ann, new_w, new_h)) continue;
    kept.push_back(std::move(ann));
  }
  ds.annotations = std::move(kept);
  img->width = new_w;
  img->height = new_h;
}

std::optional<std::string> annotation_violation(const Dataset& ds, const Annotation& ann) {
  const ImageRecord* img = ds.find_image(ann.image_id);
  if (!img) return "annotation " + std::to_string(ann.id) + ": dangling image_id";
  const double eps = 1e-6;
  for (const auto& ring : ann.segmentation) {
    for (size_t i = 0; i + 1 < ring.size(); i += 2) {
      if (ring[i] < -eps || ring[i] > img->width + eps || ring[i + 1] < -eps ||
          ring[i + 1] > img->height + eps)
        return "annotation " + std::to_string(ann.id) + ": vertex (" + std::to_string(ring[i]) +
               ", " + std::to_string(ring[i + 1]) + ") outside image bounds";
    }
  }

  Annotation probe = ann;
  if (!retighten_annotation(probe, img->width, img->height))
    return "annotation " + std::to_string(ann.id) + ": rasterizes to an empty mask";

  for (int side = 0; side < 4; ++side) {
    const double got = side < 2 ? ann.bbox[side] : ann.bbox[side - 2] + ann.bbox[side];
    const double want = side < 2 ? probe.bbox[side] : probe.bbox[side - 2] + probe.bbox[side];
    if (std::abs(got - want) > 1.0 + eps)
      return "annotation " + std::to_string(ann.id) + ": bbox side " + std::to_string(side) +
             " off by " + std::to_string(got - want) + " px";
  }
  const double tol = std::max(0.02 * probe.area, 5.0);
  if (std::abs(ann.area - probe.area) > tol)
    return "annotation " + std::to_string(ann.id) + ": area " + std::to_string(ann.area) +
           " vs rasterized " + std::to_string(probe.area);
  return std::nullopt;
}

} // namespace courtprior
