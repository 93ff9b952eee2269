#include "courtprior/copypaste.hpp"

#include <algorithm>
#include <cmath>

#include "courtprior/parallel.hpp"
#include "courtprior/styles.hpp"

namespace courtprior {

namespace {

Mask mask_hflip(const Mask& m) {
  Mask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(x, y)) out.set(m.width - 1 - x, y);
  return out;
}

Mask mask_resize_nearest(const Mask& m, int w, int h) {
  Mask out(w, h);
  const double sx = static_cast<double>(m.width) / w;
  const double sy = static_cast<double>(m.height) / h;
  for (int y = 0; y < h; ++y) {
    const int src_y = std::clamp(static_cast<int>((y + 0.5) * sy), 0, m.height - 1);
    for (int x = 0; x < w; ++x) {
      const int src_x = std::clamp(static_cast<int>((x + 0.5) * sx), 0, m.width - 1);
      if (m.at(src_x, src_y)) out.set(x, y);
    }
  }
  return out;
}

std::string path_stem(const std::string& file_name) {
  const size_t slash = file_name.find_last_of("/\\");
  const size_t start = slash == std::string::npos ? 0 : slash + 1;
  const size_t dot = file_name.find_last_of('.');
  const size_t end = (dot == std::string::npos || dot < start) ? file_name.size() : dot;
  return file_name.substr(start, end - start);
}

} // namespace

std::vector<InstancePatch> harvest(
    const Dataset& ds, const std::function<const Raster&(const ImageRecord&)>& image_of,
    const std::map<int, Identity>& identities, double min_visible_area) {
  std::vector<InstancePatch> patches;
  patches.reserve(ds.annotations.size());

  for (const Annotation& ann : ds.annotations) {
    const ImageRecord* im = ds.find_image(ann.image_id);
    if (!im) continue;
    const auto id_it = identities.find(ann.id);
    if (id_it == identities.end()) continue;

    // Local-window rasterization of the instance mask.
    Annotation probe = ann;
    if (!retighten_annotation(probe, im->width, im->height)) continue;
    const Rect box{static_cast<int>(probe.bbox[0]), static_cast<int>(probe.bbox[1]),
                   static_cast<int>(probe.bbox[2]), static_cast<int>(probe.bbox[3])};
    const Mask mask = rasterize(ann.segmentation, box);
    if (static_cast<double>(mask.popcount()) < min_visible_area) continue;

    const Raster& src = image_of(*im);
    Raster pixels(box.w, box.h, 3);
    for (int y = 0; y < box.h; ++y) {
      const uint8_t* srow = src.row(box.y + y);
      uint8_t* drow = pixels.row(y);
      for (int x = 0; x < box.w; ++x) {
        if (!mask.at(x, y)) continue;
        const uint8_t* s = srow + static_cast<size_t>(box.x + x) * 3;
        drow[3 * x] = s[0];
        drow[3 * x + 1] = s[1];
        drow[3 * x + 2] = s[2];
      }
    }
    patches.push_back(InstancePatch{std::move(pixels), mask, id_it->second, im->id, ann.id,
                                    ann.category_id, im->court_label});
  }
  return patches;
}

Vec2 sample_position(RngStream& rng, Identity identity, const CourtRegion& region,
                     int patch_w, int patch_h, int frame_w, int frame_h, double margin_px) {
  const auto [lo, hi] = bounds_of(region.hull);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
    bool ok = false;
    switch (identity) {
      case Identity::Player:
        ok = contains_with_margin(region.interior, p, margin_px);
        break;
      case Identity::Perimeter:
        ok = contains_with_margin(region.hull, p, margin_px) &&
             !inside(region.interior, p) &&
             distance_to_boundary(region.interior, p) >= margin_px;
        break;
      case Identity::Ball:
        ok = contains_with_margin(region.hull, p, margin_px);
        break;
    }
    if (!ok) continue;
    // The scaled patch footprint must overlap the frame.
    const Rect dest{static_cast<int>(std::llround(p.x - patch_w / 2.0)),
                    static_cast<int>(std::llround(p.y - patch_h)), patch_w, patch_h};
    if (dest.intersect(Rect{0, 0, frame_w, frame_h}).empty()) continue;
    return p;
  }
  throw RegionTooSmall("could not place a " + to_string(identity) +
                       " anchor after 1000 rejections");
}

int paste(Raster& img, Dataset& ds, const InstancePatch& patch, const PastePlan& plan,
          RngStream& rng, const CopyPasteConfig& cfg) {
  // Style transform runs on the patch, before any compositing.
  Raster styled;
  if (patch.identity == Identity::Player) {
    RngStream curve_rng = rng.child("curve");
    const RgbCurve curve = sample_curve(curve_rng, cfg.player_curve_strength);
    styled = apply_player_style(patch.pixels, patch.mask, curve);
  } else {
    RngStream bright_rng = rng.child("brightness");
    const double brightness = bright_rng.uniform(cfg.brightness_min, cfg.brightness_max);
    RngStream noise_rng = rng.child("noise");
    styled = apply_perimeter_style(patch.pixels, patch.mask, noise_rng, cfg.sp_density, brightness);
  }

  Mask mask = patch.mask;
  if (plan.flipped) {
    styled = hflip(styled);
    mask = mask_hflip(mask);
  }
  int pw = styled.width();
  int ph = styled.height();
  if (plan.scale != 1.0) {
    pw = std::max(1, static_cast<int>(std::lround(pw * plan.scale)));
    ph = std::max(1, static_cast<int>(std::lround(ph * plan.scale)));
    styled = resize(styled, pw, ph);
    mask = mask_resize_nearest(mask, pw, ph);
  }

  const int dest_x = static_cast<int>(std::llround(plan.x - pw / 2.0));
  const int dest_y = static_cast<int>(std::llround(plan.y - ph));
  const Rect frame{0, 0, img.width(), img.height()};
  const Rect visible = Rect{dest_x, dest_y, pw, ph}.intersect(frame);
  if (visible.empty())
    throw OutOfFrame("pasted patch lies entirely outside the image");

  // Visible part of the pasted mask, in its own window.
  Mask pasted(visible.w, visible.h);
  size_t pasted_pixels = 0;
  for (int y = 0; y < visible.h; ++y) {
    for (int x = 0; x < visible.w; ++x) {
      if (mask.at(visible.x - dest_x + x, visible.y - dest_y + y)) {
        pasted.set(x, y);
        ++pasted_pixels;
      }
    }
  }
  if (static_cast<double>(pasted_pixels) < cfg.min_visible_area) return 0;

  // Hard composite.
  for (int y = 0; y < visible.h; ++y) {
    uint8_t* drow = img.row(visible.y + y);
    const uint8_t* srow = styled.row(visible.y - dest_y + y);
    for (int x = 0; x < visible.w; ++x) {
      if (!pasted.at(x, y)) continue;
      const uint8_t* s = srow + static_cast<size_t>(visible.x - dest_x + x) * 3;
      uint8_t* d = drow + static_cast<size_t>(visible.x + x) * 3;
      d[0] = s[0];
      d[1] = s[1];
      d[2] = s[2];
    }
  }

  // Subtract the pasted region from every pre-existing annotation it
  // overlaps; re-tighten or drop them.
  std::vector<Annotation> kept;
  kept.reserve(ds.annotations.size());
  for (Annotation& ann : ds.annotations) {
    if (ann.image_id != plan.target_image_id) {
      kept.push_back(std::move(ann));
      continue;
    }
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    for (const auto& ring : ann.segmentation) {
      for (size_t i = 0; i + 1 < ring.size(); i += 2) {
        min_x = std::min(min_x, ring[i]);
        max_x = std::max(max_x, ring[i]);
        min_y = std::min(min_y, ring[i + 1]);
        max_y = std::max(max_y, ring[i + 1]);
      }
    }
    const Rect window = Rect{static_cast<int>(std::floor(min_x)), static_cast<int>(std::floor(min_y)),
                             static_cast<int>(std::ceil(max_x) - std::floor(min_x)) + 1,
                             static_cast<int>(std::ceil(max_y) - std::floor(min_y)) + 1}
                            .intersect(frame);
    const Rect overlap = window.intersect(visible);
    if (overlap.empty()) {
      kept.push_back(std::move(ann));
      continue;
    }
    Mask local = rasterize(ann.segmentation, window);
    size_t removed = 0;
    for (int y = 0; y < overlap.h; ++y) {
      for (int x = 0; x < overlap.w; ++x) {
        const int lx = overlap.x - window.x + x;
        const int ly = overlap.y - window.y + y;
        if (!local.at(lx, ly)) continue;
        if (pasted.at(overlap.x - visible.x + x, overlap.y - visible.y + y)) {
          local.set(lx, ly, false);
          ++removed;
        }
      }
    }
    if (removed == 0) {
      kept.push_back(std::move(ann));
      continue;
    }
    const size_t remaining = local.popcount();
    if (static_cast<double>(remaining) < cfg.min_visible_area) continue; // fully occluded
    ann.segmentation = mask_to_polygons(local, window.x, window.y);
    const auto tb = local.tight_bbox();
    ann.bbox = {static_cast<double>(window.x + tb->x), static_cast<double>(window.y + tb->y),
                static_cast<double>(tb->w), static_cast<double>(tb->h)};
    ann.area = static_cast<double>(remaining);
    kept.push_back(std::move(ann));
  }
  ds.annotations = std::move(kept);

  // New annotation from the pasted mask.
  Annotation fresh;
  fresh.id = ds.next_annotation_id();
  fresh.image_id = plan.target_image_id;
  fresh.category_id = patch.category_id;
  fresh.segmentation = mask_to_polygons(pasted, visible.x, visible.y);
  const auto tb = pasted.tight_bbox();
  fresh.bbox = {static_cast<double>(visible.x + tb->x), static_cast<double>(visible.y + tb->y),
                static_cast<double>(tb->w), static_cast<double>(tb->h)};
  fresh.area = static_cast<double>(pasted_pixels);
  fresh.extra["cp_identity"] = to_string(patch.identity);
  fresh.extra["cp_source"] = nlohmann::json::array({patch.source_image_id,
                                                    patch.source_annotation_id});
  const int new_id = fresh.id;
  ds.annotations.push_back(std::move(fresh));
  return new_id;
}

// ---------------------------------------------------------------------------
// Dataset-level augmentation

namespace {

struct WorkUnit {
  const ImageRecord* source = nullptr;
  int replicas = 0; // 1 pass-through for test images
};

struct ReplicaOutput {
  ImageRecord record;
  std::vector<Annotation> annotations; // image_id set to 0; fixed at merge
  std::vector<std::string> warnings;
};

} // namespace

Dataset augment_dataset(const Dataset& ds, const std::map<int, CourtRegion>& regions,
                        const ImageLoader& load, const RasterSink& sink,
                        const CopyPasteConfig& cfg, uint64_t seed, bool crop_to_court,
                        int threads, std::vector<std::string>* warnings) {
  if (cfg.duplication < 1) throw ConfigError("copypaste.duplication must be at least 1");
  if (cfg.paste_min < 0 || cfg.paste_max < cfg.paste_min)
    throw ConfigError("copypaste paste range is invalid");

  // Classify all annotations up front (identity of harvested donors).
  std::map<int, Identity> identities;
  for (const Annotation& ann : ds.annotations) {
    const auto it = regions.find(ann.image_id);
    if (it == regions.end()) continue;
    identities.emplace(ann.id,
                       classify(ann, it->second, ds.category_name(ann.category_id)));
  }

  // Donor patches come from train/val sources only, keyed by split so a
  // replica never pastes objects leaked from another split.
  std::map<int, Raster> decoded;
  const std::function<const Raster&(const ImageRecord&)> cached_load =
      [&](const ImageRecord& im) -> const Raster& {
    auto it = decoded.find(im.id);
    if (it == decoded.end()) it = decoded.emplace(im.id, load(im)).first;
    return it->second;
  };
  Dataset donors = ds;
  donors.images.clear();
  donors.annotations.clear();
  for (const auto& im : ds.images)
    if (im.split != "test") donors.images.push_back(im);
  for (const auto& ann : ds.annotations)
    if (donors.find_image(ann.image_id)) donors.annotations.push_back(ann);
  const std::vector<InstancePatch> pool =
      harvest(donors, cached_load, identities, cfg.min_visible_area);
  decoded.clear();

  std::map<std::string, std::vector<size_t>> pool_by_split;
  for (size_t i = 0; i < pool.size(); ++i) {
    const ImageRecord* im = ds.find_image(pool[i].source_image_id);
    pool_by_split[im->split].push_back(i);
  }

  // Deterministic plan: sorted sources, then replica index.
  std::vector<WorkUnit> units;
  std::vector<const ImageRecord*> sorted;
  for (const auto& im : ds.images) sorted.push_back(&im);
  std::sort(sorted.begin(), sorted.end(),
            [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });
  for (const ImageRecord* im : sorted) {
    const bool augmented = im->split != "test";
    if ((augmented || crop_to_court) && !regions.count(im->id))
      throw MissingRegion("no region for image " + std::to_string(im->id));
    units.push_back({im, augmented ? cfg.duplication : 1});
  }

  // Precompute every output record id and name.
  std::vector<std::vector<ImageRecord>> planned(units.size());
  int next_id = 1;
  for (size_t u = 0; u < units.size(); ++u) {
    const ImageRecord& src = *units[u].source;
    const bool augmented = src.split != "test";
    const Rect crop = crop_to_court ? regions.at(src.id).crop : Rect{0, 0, src.width, src.height};
    for (int k = 0; k < units[u].replicas; ++k) {
      ImageRecord rec = src;
      rec.id = next_id++;
      char suffix[24];
      if (augmented) {
        std::snprintf(suffix, sizeof(suffix), "_rep%02d.png", k);
        rec.file_name = path_stem(src.file_name) + suffix;
      } else {
        rec.file_name = path_stem(src.file_name) + ".png";
      }
      rec.width = crop.w;
      rec.height = crop.h;
      planned[u].push_back(std::move(rec));
    }
  }

  std::vector<std::vector<ReplicaOutput>> results(units.size());
  parallel_for(units.size(), threads, [&](size_t u) {
    const ImageRecord& src = *units[u].source;
    const bool augmented = src.split != "test";
    const Raster original = load(src);

    // Court crop of the source frame (shared by all replicas).
    Raster base = original;
    CourtRegion region = regions.count(src.id)
                             ? regions.at(src.id)
                             : CourtRegion{Polygon({{0, 0},
                                                    {static_cast<double>(src.width), 0},
                                                    {static_cast<double>(src.width),
                                                     static_cast<double>(src.height)},
                                                    {0, static_cast<double>(src.height)}}),
                                           Rect{0, 0, src.width, src.height},
                                           Rect{0, 0, src.width, src.height},
                                           Polygon({{1, 1},
                                                    {static_cast<double>(src.width - 1), 1},
                                                    {static_cast<double>(src.width - 1),
                                                     static_cast<double>(src.height - 1)},
                                                    {1, static_cast<double>(src.height - 1)}}),
                                           0.2,
                                           true};
    Dataset base_ds;
    base_ds.categories = ds.categories;
    base_ds.images.push_back(src);
    for (const auto& ann : ds.annotations)
      if (ann.image_id == src.id) base_ds.annotations.push_back(ann);
    if (crop_to_court) {
      base = crop(original, region.crop);
      transform_crop(base_ds, src.id, region.crop, cfg.min_visible_area);
      region = shift_region_to_crop(region);
    }

    const std::vector<size_t>* split_pool = nullptr;
    if (const auto it = pool_by_split.find(src.split); it != pool_by_split.end())
      split_pool = &it->second;

    for (int k = 0; k < units[u].replicas; ++k) {
      const ImageRecord& rec = planned[u][k];
      ReplicaOutput out;
      out.record = rec;

      Raster pixels = base;
      Dataset scratch;
      scratch.categories = ds.categories;
      ImageRecord local = rec;
      scratch.images.push_back(local);
      for (const auto& ann : base_ds.annotations) {
        Annotation copy = ann;
        copy.image_id = rec.id;
        scratch.annotations.push_back(std::move(copy));
      }

      if (augmented && split_pool && !split_pool->empty() && cfg.paste_max > 0) {
        RngStream rng = RngStream(seed).child("augment").child(static_cast<uint64_t>(src.id))
                            .child(static_cast<uint64_t>(k));
        const int n_paste = static_cast<int>(rng.uniform_int(cfg.paste_min, cfg.paste_max));
        try {
          for (int j = 0; j < n_paste; ++j) {
            RngStream paste_rng = rng.child("paste").child(static_cast<uint64_t>(j));
            std::vector<size_t> candidates = *split_pool;
            if (cfg.same_court_only) {
              std::vector<size_t> filtered;
              for (const size_t idx : candidates)
                if (pool[idx].court_label == src.court_label) filtered.push_back(idx);
              candidates = std::move(filtered);
            }
            if (candidates.empty()) break;
            const InstancePatch& patch =
                pool[candidates[static_cast<size_t>(paste_rng.uniform_int(
                    0, static_cast<int64_t>(candidates.size()) - 1))]];

            const bool flip = paste_rng.bernoulli(cfg.flip_prob);
            const double scale = paste_rng.uniform(cfg.scale_min, cfg.scale_max);
            const int pw = std::max(1, static_cast<int>(std::lround(patch.pixels.width() * scale)));
            const int ph = std::max(1, static_cast<int>(std::lround(patch.pixels.height() * scale)));
            RngStream pos_rng = paste_rng.child("position");
            const Vec2 anchor = sample_position(pos_rng, patch.identity, region, pw, ph,
                                                pixels.width(), pixels.height(),
                                                cfg.placement_margin_px);
            PastePlan plan{rec.id, anchor.x, anchor.y, scale, flip};
            RngStream apply_rng = paste_rng.child("apply");
            paste(pixels, scratch, patch, plan, apply_rng, cfg);
          }
        } catch (const RegionTooSmall& e) {
          out.warnings.push_back("image " + std::to_string(src.id) + " replica " +
                                 std::to_string(k) + ": " + e.what() +
                                 "; emitted unaugmented");
          pixels = base;
          scratch.annotations.clear();
          for (const auto& ann : base_ds.annotations) {
            Annotation copy = ann;
            copy.image_id = rec.id;
            scratch.annotations.push_back(std::move(copy));
          }
        }
      }

      out.annotations = std::move(scratch.annotations);
      sink(rec, pixels);
      results[u].push_back(std::move(out));
    }
  });

  // Deterministic merge: unit order, then replica order; annotation ids
  // renumbered sequentially.
  Dataset out;
  out.categories = ds.categories;
  out.extra = ds.extra;
  int next_ann = 1;
  for (auto& unit_results : results) {
    for (auto& rep : unit_results) {
      out.images.push_back(rep.record);
      for (Annotation& ann : rep.annotations) {
        ann.id = next_ann++;
        ann.image_id = rep.record.id;
        out.annotations.push_back(std::move(ann));
      }
      if (warnings)
        warnings->insert(warnings->end(), rep.warnings.begin(), rep.warnings.end());
    }
  }
  return out;
}

} // namespace courtprior
