#include "courtprior/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "courtprior/draw.hpp"
#include "courtprior/log.hpp"
#include "courtprior/onlineaug.hpp"
#include "courtprior/parallel.hpp"

namespace courtprior {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string stem_of(const std::string& file_name) {
  return fs::path(file_name).stem().string();
}

CourtDetectParams detect_params(const PipelineConfig& cfg) {
  CourtDetectParams p = cfg.court;
  p.seed = cfg.seed;
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f << text;
  if (!f) throw IoError("short write to " + path.string());
}

std::vector<const ImageRecord*> sorted_images(const Dataset& ds, const std::string& split) {
  std::vector<const ImageRecord*> out;
  for (const auto& im : ds.images)
    if (split.empty() || im.split == split) out.push_back(&im);
  std::sort(out.begin(), out.end(),
            [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });
  return out;
}

} // namespace

std::vector<RegionRecord> detect_regions_for_dataset(const Dataset& ds,
                                                     const fs::path& images_dir,
                                                     const PipelineConfig& cfg) {
  const auto images = sorted_images(ds, "");
  const CourtDetectParams params = detect_params(cfg);
  std::vector<std::optional<RegionRecord>> slots(images.size());
  parallel_for(images.size(), resolve_threads(cfg.threads), [&](size_t i) {
    const ImageRecord& im = *images[i];
    const Raster img = load_image(images_dir / im.file_name);
    slots[i].emplace(im.id, im.file_name, im.width, im.height, detect_court(img, params));
  });
  std::vector<RegionRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  log_info("detect-court: " + std::to_string(out.size()) + " images processed");
  return out;
}

std::vector<RegionRecord> detect_regions_for_dir(const fs::path& images_dir,
                                                 const PipelineConfig& cfg) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(images_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const CourtDetectParams params = detect_params(cfg);
  std::vector<std::optional<RegionRecord>> slots(files.size());
  parallel_for(files.size(), resolve_threads(cfg.threads), [&](size_t i) {
    const Raster img = load_image(files[i]);
    slots[i].emplace(static_cast<int>(i) + 1, files[i].filename().string(), img.width(),
                     img.height(), detect_court(img, params));
  });
  std::vector<RegionRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  log_info("detect-court: " + std::to_string(out.size()) + " files processed");
  return out;
}

std::map<int, CourtRegion> match_regions(const Dataset& ds,
                                         const std::vector<RegionRecord>& records) {
  std::map<int, CourtRegion> by_id;
  std::map<std::string, const CourtRegion*> by_name;
  std::map<int, const CourtRegion*> record_ids;
  for (const RegionRecord& r : records) {
    record_ids.emplace(r.image_id, &r.region);
    if (!r.file_name.empty()) by_name.emplace(r.file_name, &r.region);
  }
  for (const auto& im : ds.images) {
    if (const auto it = record_ids.find(im.id); it != record_ids.end()) {
      by_id.emplace(im.id, *it->second);
    } else if (const auto nit = by_name.find(im.file_name); nit != by_name.end()) {
      by_id.emplace(im.id, *nit->second);
    }
  }
  return by_id;
}

json classify_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions) {
  std::vector<const Annotation*> anns;
  for (const auto& a : ds.annotations) anns.push_back(&a);
  std::sort(anns.begin(), anns.end(),
            [](const Annotation* a, const Annotation* b) { return a->id < b->id; });
  json out = json::object();
  for (const Annotation* ann : anns) {
    const auto it = regions.find(ann->image_id);
    if (it == regions.end())
      throw MissingRegion("no region for image " + std::to_string(ann->image_id) +
                          " (annotation " + std::to_string(ann->id) + ")");
    out[std::to_string(ann->id)] =
        to_string(classify(*ann, it->second, ds.category_name(ann->category_id)));
  }
  log_info("classify: " + std::to_string(anns.size()) + " annotations labelled");
  return out;
}

std::vector<std::string> augment_stage(const Dataset& ds,
                                       const std::map<int, CourtRegion>& regions,
                                       const fs::path& images_dir, const fs::path& out_dir,
                                       const PipelineConfig& cfg, bool crop_to_court) {
  fs::create_directories(out_dir);
  const auto load = [&](const ImageRecord& im) { return load_image(images_dir / im.file_name); };
  const auto sink = [&](const ImageRecord& rec, const Raster& img) {
    save_png(img, out_dir / rec.file_name);
  };
  std::vector<std::string> warnings;
  const Dataset out = augment_dataset(ds, regions, load, sink, cfg.copypaste, cfg.seed,
                                      crop_to_court, resolve_threads(cfg.threads), &warnings);
  save_dataset(out, out_dir / "annotations.json");
  for (const std::string& w : warnings) log_warn("augment: " + w);
  log_info("augment: " + std::to_string(out.images.size()) + " images, " +
           std::to_string(out.annotations.size()) + " annotations written to " +
           out_dir.string());
  return warnings;
}

void online_stage(const Dataset& ds, const fs::path& images_dir, const fs::path& out_dir,
                  const PipelineConfig& cfg, const std::string& split) {
  fs::create_directories(out_dir);
  const auto images = sorted_images(ds, split);

  struct Slot {
    ImageRecord record;
    std::vector<Annotation> annotations;
    json trace;
  };
  std::vector<std::optional<Slot>> slots(images.size());
  parallel_for(images.size(), resolve_threads(cfg.threads), [&](size_t i) {
    const ImageRecord& im = *images[i];
    const Raster img = load_image(images_dir / im.file_name);

    Dataset sample;
    sample.categories = ds.categories;
    sample.images.push_back(im);
    for (const auto& ann : ds.annotations)
      if (ann.image_id == im.id) sample.annotations.push_back(ann);

    RngStream rng = RngStream(cfg.seed).child("online").child(static_cast<uint64_t>(im.id));
    OnlineResult r = run_online(img, std::move(sample), im.id, rng, cfg.online);

    Slot slot;
    slot.record = r.sample.images[0];
    slot.record.file_name = stem_of(im.file_name) + "_online.png";
    slot.annotations = std::move(r.sample.annotations);
    slot.trace = json{{"image_id", im.id},
                      {"file_name", slot.record.file_name},
                      {"trace", r.trace.to_json()}};
    save_png(r.image, out_dir / slot.record.file_name);
    slots[i] = std::move(slot);
  });

  Dataset out;
  out.categories = ds.categories;
  out.extra = ds.extra;
  std::string traces;
  int next_ann = 1;
  for (auto& s : slots) {
    out.images.push_back(s->record);
    for (Annotation& ann : s->annotations) {
      ann.id = next_ann++;
      out.annotations.push_back(std::move(ann));
    }
    traces += s->trace.dump();
    traces += '\n';
  }
  save_dataset(out, out_dir / "annotations.json");
  write_text(out_dir / "traces.jsonl", traces);
  log_info("online: " + std::to_string(out.images.size()) + " samples materialized to " +
           out_dir.string());
}

std::vector<RoiRecord> roi_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                                 const fs::path& images_dir, const fs::path& out_dir,
                                 const PipelineConfig& cfg, const std::string& split) {
  fs::create_directories(out_dir);
  const auto images = sorted_images(ds, split);
  std::vector<std::optional<RoiRecord>> slots(images.size());
  parallel_for(images.size(), resolve_threads(cfg.threads), [&](size_t i) {
    const ImageRecord& im = *images[i];
    const auto it = regions.find(im.id);
    if (it == regions.end())
      throw MissingRegion("no region for image " + std::to_string(im.id));
    const Raster img = load_image(images_dir / im.file_name);
    auto [roi, transform] = make_roi(img, it->second, cfg.roi_max_side);
    RoiRecord rec;
    rec.image_id = im.id;
    rec.file_name = stem_of(im.file_name) + "_roi.png";
    rec.transform = transform;
    save_png(roi, out_dir / rec.file_name);
    slots[i] = std::move(rec);
  });
  std::vector<RoiRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  save_roi_transforms(out, out_dir / "transforms.json");
  log_info("roi: " + std::to_string(out.size()) + " images written to " + out_dir.string());
  return out;
}

std::string stats_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                        const fs::path& out_csv) {
  const auto rows = crop_area_report(ds, regions);
  write_text(out_csv, stats_to_csv(rows));
  log_info("stats: " + std::to_string(rows.size()) + " groups written to " + out_csv.string());
  return stats_barchart(rows);
}

Raster render_preview(const Raster& img, const CourtRegion& region) {
  Raster out = img.channels() == 3 ? img : [&] {
    Raster rgb(img.width(), img.height(), 3);
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) {
        const uint8_t v = img.at(x, y);
        rgb.at(x, y, 0) = v;
        rgb.at(x, y, 1) = v;
        rgb.at(x, y, 2) = v;
      }
    return rgb;
  }();

  const Color green{0, 220, 0};
  const Color blue{40, 90, 255};
  const Color red{230, 30, 30};
  draw_rect(out, fallback_crop(img.width(), img.height()), blue);
  draw_ring(out, region.hull.vertices(), green);
  draw_ring(out, region.interior.vertices(), green, 8, 6);
  draw_rect(out, region.crop, red);
  return out;
}

void run_full_pipeline(const Dataset& ds, const fs::path& images_dir, const fs::path& out_dir,
                       const PipelineConfig& cfg) {
  fs::create_directories(out_dir);
  const auto records = detect_regions_for_dataset(ds, images_dir, cfg);
  save_regions(records, out_dir / "regions.json");
  const auto regions = match_regions(ds, records);

  write_text(out_dir / "identities.json", classify_stage(ds, regions).dump(1));
  augment_stage(ds, regions, images_dir, out_dir / "augmented", cfg, /*crop_to_court=*/true);
  roi_stage(ds, regions, images_dir, out_dir / "roi", cfg, "test");
  log_info("pipeline: complete under " + out_dir.string());
}

} // namespace courtprior
