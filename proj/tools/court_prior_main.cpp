// court-prior: dataset preprocessing and augmentation toolkit for
// sport-scene instance segmentation. Detects the court, classifies object
// identities by court position, runs identity-conditioned copy-paste and
// online augmentation, and produces ROI crops with exact back-mapping.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "courtprior/config.hpp"
#include "courtprior/log.hpp"
#include "courtprior/pipeline.hpp"

namespace fs = std::filesystem;
using namespace courtprior;

namespace {

struct CommonOpts {
  std::string config_file;
  std::vector<std::string> overrides;
  int64_t seed_flag = -1;
  int threads_flag = -1;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_file, "Config file (JSON)");
  cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set court.canny_low=40");
  cmd->add_option("--seed", opts.seed_flag, "Random seed (wins over the config file)");
  cmd->add_option("--threads", opts.threads_flag, "Worker threads (0 = auto)");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
  PipelineConfig cfg = PipelineConfig::resolve(opts.config_file, opts.overrides);
  if (opts.seed_flag >= 0) cfg.seed = static_cast<uint64_t>(opts.seed_flag);
  if (opts.threads_flag >= 0) cfg.threads = opts.threads_flag;
  return cfg;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path.string());
  f << text;
  if (!f) throw IoError("short write to " + path.string());
}

const CourtRegion& region_for_file(const std::vector<RegionRecord>& records,
                                   const std::string& file_name) {
  for (const RegionRecord& r : records)
    if (r.file_name == file_name || fs::path(r.file_name).filename() == file_name)
      return r.region;
  throw MissingRegion("no region record for file " + file_name);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"court-prior: court-aware dataset preprocessing and augmentation"};
  app.require_subcommand(0, 1);
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "Print the full default config reference and exit");

  // ---- detect-court ----
  auto* cmd_detect = app.add_subcommand("detect-court", "Detect the court in every image");
  CommonOpts detect_opts;
  std::string detect_images, detect_dataset, detect_out;
  cmd_detect->add_option("--images", detect_images, "Image directory")
      ->required();
  cmd_detect->add_option("--dataset", detect_dataset, "COCO annotations (ids and file names)");
  cmd_detect->add_option("--out", detect_out, "Output regions.json")->required();
  add_common_options(cmd_detect, detect_opts);

  // ---- classify ----
  auto* cmd_classify = app.add_subcommand("classify", "Assign player/perimeter/ball identities");
  CommonOpts classify_opts;
  std::string classify_dataset, classify_regions, classify_out;
  cmd_classify->add_option("--dataset", classify_dataset, "COCO annotations")
      ->required();
  cmd_classify->add_option("--regions", classify_regions, "regions.json from detect-court")
      ->required();
  cmd_classify->add_option("--out", classify_out, "Output identities.json")->required();
  add_common_options(cmd_classify, classify_opts);

  // ---- augment ----
  auto* cmd_augment = app.add_subcommand("augment", "Copy-paste (or --online) augmentation");
  CommonOpts augment_opts;
  std::string augment_dataset_path, augment_images, augment_regions, augment_out;
  bool augment_crop = false, augment_online = false;
  std::string augment_split = "train";
  cmd_augment->add_option("--dataset", augment_dataset_path, "COCO annotations")
      ->required();
  cmd_augment->add_option("--images", augment_images, "Image directory")
      ->required();
  cmd_augment->add_option("--regions", augment_regions, "regions.json from detect-court");
  cmd_augment->add_option("--out-dir", augment_out, "Output directory")->required();
  cmd_augment->add_flag("--crop-to-court", augment_crop,
                        "Crop every image to its court region first");
  cmd_augment->add_flag("--online", augment_online,
                        "Materialize one online-augmentation epoch instead of copy-paste");
  cmd_augment->add_option("--split", augment_split, "Split for --online (default train)");
  add_common_options(cmd_augment, augment_opts);

  // ---- stats ----
  auto* cmd_stats = app.add_subcommand("stats", "Cropped-area statistics per court and split");
  CommonOpts stats_opts;
  std::string stats_dataset, stats_regions, stats_out;
  cmd_stats->add_option("--dataset", stats_dataset, "COCO annotations")
      ->required();
  cmd_stats->add_option("--regions", stats_regions, "regions.json")
      ->required();
  cmd_stats->add_option("--out", stats_out, "Output CSV")->required();
  add_common_options(cmd_stats, stats_opts);

  // ---- roi ----
  auto* cmd_roi = app.add_subcommand("roi", "Produce reduced inference inputs from court crops");
  CommonOpts roi_opts;
  std::string roi_images, roi_regions, roi_dataset, roi_out, roi_split;
  cmd_roi->add_option("--images", roi_images, "Image directory")
      ->required();
  cmd_roi->add_option("--regions", roi_regions, "regions.json")
      ->required();
  cmd_roi->add_option("--dataset", roi_dataset, "COCO annotations (enables --split filtering)");
  cmd_roi->add_option("--split", roi_split, "Restrict to one split (requires --dataset)");
  cmd_roi->add_option("--out-dir", roi_out, "Output directory")->required();
  add_common_options(cmd_roi, roi_opts);

  // ---- map-back ----
  auto* cmd_mapback = app.add_subcommand("map-back", "Map ROI detections to original coordinates");
  std::string mb_detections, mb_transforms, mb_out;
  cmd_mapback->add_option("--detections", mb_detections, "Detections JSONL in ROI coordinates")
      ->required();
  cmd_mapback->add_option("--transforms", mb_transforms, "transforms.json from roi")
      ->required();
  cmd_mapback->add_option("--out", mb_out, "Output JSONL in original coordinates")->required();

  // ---- preview ----
  auto* cmd_preview = app.add_subcommand("preview", "Render the detection overlay for one image");
  CommonOpts preview_opts;
  std::string pv_image, pv_regions, pv_out;
  cmd_preview->add_option("--image", pv_image, "Image file")->required();
  cmd_preview->add_option("--regions", pv_regions,
                          "regions.json (the image is matched by file name; "
                          "omit to detect on the fly)");
  cmd_preview->add_option("--out", pv_out, "Output PNG")->required();
  add_common_options(cmd_preview, preview_opts);

  // ---- pipeline ----
  auto* cmd_pipeline = app.add_subcommand(
      "pipeline", "detect-court -> classify -> augment (cropped) -> roi in one run");
  CommonOpts pipeline_opts;
  std::string pl_dataset, pl_images, pl_out;
  cmd_pipeline->add_option("--dataset", pl_dataset, "COCO annotations")
      ->required();
  cmd_pipeline->add_option("--images", pl_images, "Image directory")
      ->required();
  cmd_pipeline->add_option("--out-dir", pl_out, "Output directory")->required();
  add_common_options(cmd_pipeline, pipeline_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dump_config) {
      std::cout << PipelineConfig::reference().dump(2) << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help() << "\n";
      return 2;
    }

    if (cmd_detect->parsed()) {
      const PipelineConfig cfg = resolve_config(detect_opts);
      std::vector<RegionRecord> records;
      if (!detect_dataset.empty()) {
        const Dataset ds = load_dataset(detect_dataset);
        records = detect_regions_for_dataset(ds, detect_images, cfg);
      } else {
        records = detect_regions_for_dir(detect_images, cfg);
      }
      save_regions(records, detect_out);
    } else if (cmd_classify->parsed()) {
      const PipelineConfig cfg = resolve_config(classify_opts);
      (void)cfg;
      const Dataset ds = load_dataset(classify_dataset);
      const auto regions = match_regions(ds, load_regions(classify_regions));
      write_text_file(classify_out, classify_stage(ds, regions).dump(1));
    } else if (cmd_augment->parsed()) {
      const PipelineConfig cfg = resolve_config(augment_opts);
      const Dataset ds = load_dataset(augment_dataset_path);
      if (augment_online) {
        online_stage(ds, augment_images, augment_out, cfg, augment_split);
      } else {
        if (augment_regions.empty())
          throw ConfigError("augment requires --regions (or use --online)");
        const auto regions = match_regions(ds, load_regions(augment_regions));
        augment_stage(ds, regions, augment_images, augment_out, cfg, augment_crop);
      }
    } else if (cmd_stats->parsed()) {
      const Dataset ds = load_dataset(stats_dataset);
      const auto regions = match_regions(ds, load_regions(stats_regions));
      std::cout << stats_stage(ds, regions, stats_out);
    } else if (cmd_roi->parsed()) {
      const PipelineConfig cfg = resolve_config(roi_opts);
      const auto records = load_regions(roi_regions);
      Dataset ds;
      if (!roi_dataset.empty()) {
        ds = load_dataset(roi_dataset);
      } else {
        if (!roi_split.empty())
          throw ConfigError("--split requires --dataset");
        // Synthesize records from the regions file itself.
        for (const RegionRecord& r : records)
          ds.images.push_back({r.image_id, r.file_name, r.width, r.height, "test", "", {}});
      }
      const auto regions = match_regions(ds, records);
      roi_stage(ds, regions, roi_images, roi_out, cfg, roi_split);
    } else if (cmd_mapback->parsed()) {
      const auto records = load_roi_transforms(mb_transforms);
      std::map<int, const RoiTransform*> by_id;
      for (const RoiRecord& r : records) by_id.emplace(r.image_id, &r.transform);
      const auto detections = load_detections(mb_detections);
      std::vector<Detection> mapped;
      mapped.reserve(detections.size());
      for (const Detection& d : detections) {
        const auto it = by_id.find(d.image_id);
        if (it == by_id.end())
          throw MissingRegion("no transform for image " + std::to_string(d.image_id));
        mapped.push_back(map_back(d, *it->second));
      }
      save_detections(mapped, mb_out);
      log_info("map-back: " + std::to_string(mapped.size()) + " detections mapped");
    } else if (cmd_preview->parsed()) {
      const PipelineConfig cfg = resolve_config(preview_opts);
      const Raster img = load_image(pv_image);
      if (!pv_regions.empty()) {
        const auto records = load_regions(pv_regions);
        const CourtRegion& region =
            region_for_file(records, fs::path(pv_image).filename().string());
        save_png(render_preview(img, region), pv_out);
      } else {
        CourtDetectParams params = cfg.court;
        params.seed = cfg.seed;
        save_png(render_preview(img, detect_court(img, params)), pv_out);
      }
    } else if (cmd_pipeline->parsed()) {
      const PipelineConfig cfg = resolve_config(pipeline_opts);
      const Dataset ds = load_dataset(pl_dataset);
      run_full_pipeline(ds, pl_images, pl_out, cfg);
    }
  } catch (const Error& e) {
    log_error(e.what());
    return 1;
  } catch (const std::exception& e) {
    log_error(std::string("unexpected error: ") + e.what());
    return 1;
  }
  return 0;
}
