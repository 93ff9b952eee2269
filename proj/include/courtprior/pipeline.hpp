#ifndef COURTPRIOR_PIPELINE_HPP
#define COURTPRIOR_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "courtprior/cocodata.hpp"
#include "courtprior/config.hpp"
#include "courtprior/copypaste.hpp"
#include "courtprior/court.hpp"
#include "courtprior/roi.hpp"

namespace courtprior {

/**
 * Stage runners shared by the individual subcommands and the `pipeline`
 * command, so chaining them by hand and running the pipeline produce
 * byte-identical outputs.
 */

/// Court detection over every dataset image (files resolved against
/// images_dir). Parallel per image, results in dataset-id order.
std::vector<RegionRecord> detect_regions_for_dataset(const Dataset& ds,
                                                     const std::filesystem::path& images_dir,
                                                     const PipelineConfig& cfg);

/// Court detection over every PNG/JPEG file in a directory (sorted by
/// name; ids are 1-based positions).
std::vector<RegionRecord> detect_regions_for_dir(const std::filesystem::path& images_dir,
                                                 const PipelineConfig& cfg);

/// Region lookup for a dataset: match by image id first, file name second.
/// Only images present in the records are mapped.
std::map<int, CourtRegion> match_regions(const Dataset& ds,
                                         const std::vector<RegionRecord>& records);

/// {annotation_id: "player" | "perimeter" | "ball"} for every annotation.
nlohmann::json classify_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions);

/// Offline copy-paste augmentation: writes one PNG per output record plus
/// annotations.json into out_dir. Returns placement warnings.
std::vector<std::string> augment_stage(const Dataset& ds,
                                       const std::map<int, CourtRegion>& regions,
                                       const std::filesystem::path& images_dir,
                                       const std::filesystem::path& out_dir,
                                       const PipelineConfig& cfg, bool crop_to_court);

/// Materialize one online-augmentation epoch for the given split: PNGs,
/// annotations.json, and traces.jsonl (one replayable record per image).
void online_stage(const Dataset& ds, const std::filesystem::path& images_dir,
                  const std::filesystem::path& out_dir, const PipelineConfig& cfg,
                  const std::string& split);

/// ROI images + transforms.json for the given split ("" = all images).
std::vector<RoiRecord> roi_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                                 const std::filesystem::path& images_dir,
                                 const std::filesystem::path& out_dir,
                                 const PipelineConfig& cfg, const std::string& split);

/// Crop-area statistics: writes CSV to out_csv, returns the text barchart.
std::string stats_stage(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                        const std::filesystem::path& out_csv);

/// Overlay per the preview color scheme: detected hull green (interior
/// boundary dashed green), static margins blue, final crop red.
Raster render_preview(const Raster& img, const CourtRegion& region);

/// detect-court -> classify -> augment (crop-to-court) -> roi (test split),
/// everything under out_dir.
void run_full_pipeline(const Dataset& ds, const std::filesystem::path& images_dir,
                       const std::filesystem::path& out_dir, const PipelineConfig& cfg);

} // namespace courtprior

#endif
