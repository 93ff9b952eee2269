#include "courtprior/roi.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace courtprior {

using nlohmann::json;

std::pair<Raster, RoiTransform> make_roi(const Raster& img, const CourtRegion& region,
                                         int max_side) {
  if (max_side <= 0) throw ConfigError("roi.max_side must be positive");
  Raster cropped = crop(img, region.crop);
  RoiTransform t;
  t.crop = region.crop.intersect(Rect{0, 0, img.width(), img.height()});
  t.original_w = img.width();
  t.original_h = img.height();

  const int long_side = std::max(cropped.width(), cropped.height());
  if (long_side <= max_side) {
    t.roi_w = cropped.width();
    t.roi_h = cropped.height();
    return {std::move(cropped), t};
  }
  const double scale = static_cast<double>(max_side) / long_side;
  t.roi_w = std::max(1, static_cast<int>(std::lround(cropped.width() * scale)));
  t.roi_h = std::max(1, static_cast<int>(std::lround(cropped.height() * scale)));
  if (t.roi_w > max_side) t.roi_w = max_side;
  if (t.roi_h > max_side) t.roi_h = max_side;
  t.scale_x = static_cast<double>(t.roi_w) / cropped.width();
  t.scale_y = static_cast<double>(t.roi_h) / cropped.height();
  return {resize(cropped, t.roi_w, t.roi_h), t};
}

Vec2 roi_forward(Vec2 p, const RoiTransform& t) {
  return {(p.x - t.crop.x) * t.scale_x, (p.y - t.crop.y) * t.scale_y};
}

Detection map_back(const Detection& det, const RoiTransform& t) {
  Detection out = det;
  out.bbox[0] = det.bbox[0] / t.scale_x + t.crop.x;
  out.bbox[1] = det.bbox[1] / t.scale_y + t.crop.y;
  out.bbox[2] = det.bbox[2] / t.scale_x;
  out.bbox[3] = det.bbox[3] / t.scale_y;
  for (auto& ring : out.segmentation) {
    for (size_t i = 0; i + 1 < ring.size(); i += 2) {
      ring[i] = ring[i] / t.scale_x + t.crop.x;
      ring[i + 1] = ring[i + 1] / t.scale_y + t.crop.y;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string serialize_roi_transforms(const std::vector<RoiRecord>& records) {
  json arr = json::array();
  for (const RoiRecord& r : records) {
    json j;
    j["image_id"] = r.image_id;
    j["file_name"] = r.file_name;
    j["crop"] = json::array({r.transform.crop.x, r.transform.crop.y, r.transform.crop.w,
                             r.transform.crop.h});
    j["scale"] = json::array({r.transform.scale_x, r.transform.scale_y});
    j["original"] = json::array({r.transform.original_w, r.transform.original_h});
    j["roi"] = json::array({r.transform.roi_w, r.transform.roi_h});
    arr.push_back(std::move(j));
  }
  return arr.dump(1);
}

std::vector<RoiRecord> parse_roi_transforms(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid transforms JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("$: transforms file must be a JSON array");
  std::vector<RoiRecord> out;
  size_t idx = 0;
  for (const json& j : doc) {
    const std::string path = "$[" + std::to_string(idx++) + "]";
    for (const char* k : {"image_id", "crop", "scale", "original", "roi"})
      if (!j.contains(k)) throw SchemaError(path + ": missing required field '" + k + "'");
    RoiRecord r;
    r.image_id = j["image_id"].get<int>();
    r.file_name = j.value("file_name", std::string{});
    const auto& c = j["crop"];
    r.transform.crop = Rect{c[0].get<int>(), c[1].get<int>(), c[2].get<int>(), c[3].get<int>()};
    r.transform.scale_x = j["scale"][0].get<double>();
    r.transform.scale_y = j["scale"][1].get<double>();
    r.transform.original_w = j["original"][0].get<int>();
    r.transform.original_h = j["original"][1].get<int>();
    r.transform.roi_w = j["roi"][0].get<int>();
    r.transform.roi_h = j["roi"][1].get<int>();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RoiRecord> load_roi_transforms(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open transforms file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_roi_transforms(text);
}

void save_roi_transforms(const std::vector<RoiRecord>& records,
                         const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f << serialize_roi_transforms(records);
}

std::string detection_to_json_line(const Detection& det) {
  json j;
  j["image_id"] = det.image_id;
  j["bbox"] = det.bbox;
  j["segmentation"] = det.segmentation;
  j["score"] = det.score;
  j["category_id"] = det.category_id;
  return j.dump();
}

Detection detection_from_json_line(const std::string& line, size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError("detections line " + std::to_string(line_no) + ": " + e.what());
  }
  Detection d;
  try {
    d.image_id = j.at("image_id").get<int>();
    const auto& b = j.at("bbox");
    for (size_t i = 0; i < 4; ++i) d.bbox[i] = b.at(i).get<double>();
    if (j.contains("segmentation"))
      d.segmentation = j["segmentation"].get<std::vector<std::vector<double>>>();
    d.score = j.value("score", 0.0);
    d.category_id = j.value("category_id", 0);
  } catch (const json::exception& e) {
    throw SchemaError("detections line " + std::to_string(line_no) + ": " + e.what());
  }
  return d;
}

std::vector<Detection> load_detections(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open detections file: " + path.string());
  std::vector<Detection> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(detection_from_json_line(line, line_no));
  }
  return out;
}

void save_detections(const std::vector<Detection>& dets, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  for (const Detection& d : dets) f << detection_to_json_line(d) << '\n';
}

} // namespace courtprior
