#ifndef COURTPRIOR_COPYPASTE_HPP
#define COURTPRIOR_COPYPASTE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "courtprior/cocodata.hpp"
#include "courtprior/court.hpp"
#include "courtprior/identity.hpp"
#include "courtprior/raster.hpp"
#include "courtprior/rng.hpp"

namespace courtprior {

/// An instance lifted out of its source image: tight-bbox pixels with
/// off-mask samples zeroed, plus the identity that constrains where it
/// may be pasted. The paste anchor is the patch's bottom-center.
struct InstancePatch {
  Raster pixels;
  Mask mask;
  Identity identity = Identity::Player;
  int source_image_id = 0;
  int source_annotation_id = 0;
  int category_id = 0;
  std::string court_label;

  double anchor_x() const { return pixels.width() / 2.0; }
  double anchor_y() const { return pixels.height(); }
};

struct PastePlan {
  int target_image_id = 0;
  double x = 0.0; // anchor position in the target frame
  double y = 0.0;
  double scale = 1.0;
  bool flipped = false;
};

struct CopyPasteConfig {
  int duplication = 10;     // replicas per train/val image
  int paste_min = 1;
  int paste_max = 4;
  double scale_min = 0.8;
  double scale_max = 1.25;
  double flip_prob = 0.5;
  double min_visible_area = 16.0;
  // Positions are sampled this far inside their region boundary so the
  // realized bottom-center (after integer placement) classifies the same.
  double placement_margin_px = 2.0;
  bool same_court_only = false;

  double player_curve_strength = 0.5;
  double sp_density = 0.02;
  double brightness_min = 0.8;
  double brightness_max = 1.2;
};

/**
 * Lift every annotation with at least min_visible_area rasterized pixels
 * into an InstancePatch. image_of must return the decoded source raster
 * for an image record.
 */
std::vector<InstancePatch> harvest(
    const Dataset& ds, const std::function<const Raster&(const ImageRecord&)>& image_of,
    const std::map<int, Identity>& identities, double min_visible_area = 16.0);

/**
 * Rejection-sample an anchor position uniformly over the region allowed
 * for the identity: court interior for Player, hull-minus-interior band
 * for Perimeter, whole hull for Ball. The anchor is guaranteed to sit at
 * least margin_px inside the respective boundaries and the patch footprint
 * to intersect the frame. Throws RegionTooSmall after 1000 rejections.
 */
Vec2 sample_position(RngStream& rng, Identity identity, const CourtRegion& region,
                     int patch_w, int patch_h, int frame_w, int frame_h,
                     double margin_px = 2.0);

/**
 * Paste one patch into img/ds following the plan: identity-conditioned
 * style transform on the patch first, then optional flip and scale
 * (bilinear for pixels, nearest for the mask), then a hard composite at
 * the anchor. A new annotation is created from the pasted mask; existing
 * annotations lose the occluded region and are dropped when their visible
 * area falls below cfg.min_visible_area.
 *
 * Returns the new annotation id, or 0 when the visible pasted area was
 * below threshold (image left untouched). Throws OutOfFrame when the
 * pasted footprint misses the image entirely.
 */
int paste(Raster& img, Dataset& ds, const InstancePatch& patch, const PastePlan& plan,
          RngStream& rng, const CopyPasteConfig& cfg);

/// Output image stream of augment_dataset: called once per produced
/// image record (replica or test pass-through), in any order.
using RasterSink = std::function<void(const ImageRecord&, const Raster&)>;
using ImageLoader = std::function<Raster(const ImageRecord&)>;

/**
 * Offline augmentation over a dataset: every train/val image is
 * replicated cfg.duplication times with fresh ids, each replica receives
 * n ~ U[paste_min, paste_max] location-constrained pastes; test images
 * pass through once. With crop_to_court, every image (and its
 * annotations and region) is first cropped to the detected court.
 *
 * Fully deterministic in (seed, image id, replica index) regardless of
 * thread count; a RegionTooSmall during placement downgrades that replica
 * to an unaugmented copy and appends a warning.
 */
Dataset augment_dataset(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                        const ImageLoader& load, const RasterSink& sink,
                        const CopyPasteConfig& cfg, uint64_t seed, bool crop_to_court,
                        int threads, std::vector<std::string>* warnings = nullptr);

} // namespace courtprior

#endif
