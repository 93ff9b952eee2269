// Acceptance suite: one checked criterion per line, exit 0 only when all
// pass. Each criterion is verified against independent oracles or
// hand-computed constants; nothing here reuses the code path it checks
// where an independent route exists.

#include <sys/resource.h>

#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "courtprior/copypaste.hpp"
#include "courtprior/edgelines.hpp"
#include "courtprior/onlineaug.hpp"
#include "courtprior/pipeline.hpp"
#include "courtprior/roi.hpp"
#include "courtprior/synth.hpp"
#include "oracles.hpp"

#ifndef COURT_PRIOR_BIN
#define COURT_PRIOR_BIN "court-prior"
#endif

namespace fs = std::filesystem;
using namespace courtprior;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// Independent restatement of the court-crop formula under static margins.
Rect expected_crop(double hl, double ht, double hr, double hb, int W, int H) {
  const double min_h = H / 9.0, max_h = 8.0 * H / 9.0, min_w = W / 15.0;
  const double left = std::min(min_w, hl);
  const double top = std::max(0.0, std::max(min_h, ht) - 50.0);
  const double right = std::max(min_w, hr);
  const double bottom = std::min(max_h, hb);
  const int li = std::clamp(static_cast<int>(std::llround(left)), 0, W);
  const int ti = std::clamp(static_cast<int>(std::llround(top)), 0, H);
  const int ri = std::clamp(static_cast<int>(std::llround(right)), 0, W);
  const int bi = std::clamp(static_cast<int>(std::llround(bottom)), 0, H);
  return Rect{li, ti, ri - li, bi - ti};
}

double rect_iou(const Rect& a, const Rect& b) {
  const double inter = static_cast<double>(a.intersect(b).area());
  return inter / (static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter);
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream f(entry.path(), std::ios::binary);
    out[fs::relative(entry.path(), root).string()] =
        std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  }
  return out;
}

std::map<int, CourtRegion> truth_regions(const SynthDataset& synth) {
  std::map<int, CourtRegion> regions;
  for (const auto& im : synth.dataset.images) {
    const auto& c = synth.court_corners[static_cast<size_t>(im.id - 1)];
    const Polygon hull({c[0], c[1], c[2], c[3]});
    regions.emplace(im.id,
                    CourtRegion{hull, bbox_of(hull), Rect{0, 0, im.width, im.height},
                                shrink_toward_centroid(hull, std::sqrt(0.8)), 0.2, false});
  }
  return regions;
}

void write_corpus(const SynthDataset& synth, const fs::path& dir) {
  fs::create_directories(dir / "images");
  for (size_t i = 0; i < synth.images.size(); ++i)
    save_png(synth.images[i], dir / "images" / synth.dataset.images[i].file_name);
  save_dataset(synth.dataset, dir / "annotations.json");
}

// ---------------------------------------------------------------------------

std::string criterion1_formula_fidelity() {
  RngStream rng(101);
  int exact = 0, iou_pass = 0;
  double worst_iou = 1.0, worst_time = 0.0;
  const int n = 25;
  for (int i = 0; i < n; ++i) {
    CourtFixtureParams p;
    const double scale = rng.uniform(0.0, 1.0); // 720p .. 1080p
    p.width = static_cast<int>(std::lround(1280 + scale * 640));
    p.height = static_cast<int>(std::lround(720 + scale * 360));
    p.court_w = p.width * rng.uniform(0.58, 0.82);
    p.court_h = p.height * rng.uniform(0.58, 0.82);
    p.center_x = p.width * rng.uniform(0.44, 0.56);
    p.center_y = p.height * rng.uniform(0.44, 0.56);
    p.rotation_deg = rng.uniform(-5.0, 5.0);
    p.noise_seed = 1000 + static_cast<uint64_t>(i);
    const CourtFixture fixture = render_court(p);

    const auto start = Clock::now();
    const CourtRegion region = detect_court(fixture.image);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    worst_time = std::max(worst_time, secs);

    if (region.fallback_used) continue;
    const auto [lo, hi] = bounds_of(region.hull);
    if (region.crop == expected_crop(lo.x, lo.y, hi.x, hi.y, p.width, p.height)) ++exact;

    double hl = 1e300, ht = 1e300, hr = -1e300, hb = -1e300;
    for (const Vec2& c : fixture.corners) {
      hl = std::min(hl, c.x);
      ht = std::min(ht, c.y);
      hr = std::max(hr, c.x);
      hb = std::max(hb, c.y);
    }
    const Rect truth = expected_crop(hl, ht, hr, hb, p.width, p.height);
    const double iou = rect_iou(region.crop, truth);
    worst_iou = std::min(worst_iou, iou);
    if (iou >= 0.80) ++iou_pass;
  }
  if (exact != n)
    return format("crop matched the hand-evaluated formula on %d/%d fixtures", exact, n);
  if (iou_pass < 23)
    return format("IoU >= 0.80 on only %d/25 fixtures (worst %.3f)", iou_pass, worst_iou);
  if (worst_time >= 2.0) return format("slowest detection took %.2f s (budget 2 s)", worst_time);
  return format("ok: 25/25 exact, %d/25 IoU >= 0.80 (worst %.3f), slowest %.2f s", iou_pass,
                worst_iou, worst_time);
}

std::string criterion2_fallback_exactness() {
  for (const auto& [W, H] : {std::pair{640, 480}, {1280, 720}, {1920, 1080}, {977, 541}}) {
    const Raster blank(W, H, 3, 40);
    const CourtRegion region = detect_court(blank);
    if (!region.fallback_used) return format("blank %dx%d image did not fall back", W, H);
    const int left = static_cast<int>(std::llround(W / 15.0));
    const int top = static_cast<int>(std::llround(H / 9.0));
    const int right = static_cast<int>(std::llround(14.0 * W / 15.0));
    const int bottom = static_cast<int>(std::llround(8.0 * H / 9.0));
    const Rect want{left, top, right - left, bottom - top};
    if (!(region.crop == want))
      return format("blank %dx%d: crop [%d,%d,%d,%d] != static margins [%d,%d,%d,%d]", W, H,
                    region.crop.x, region.crop.y, region.crop.w, region.crop.h, want.x, want.y,
                    want.w, want.h);
  }
  return "ok: static-margin crop exact on 4 sizes";
}

std::string criterion3_hough_recovery() {
  const EdgeMap empty(300, 300);
  HoughParams params;
  params.vote_threshold = 50;
  params.min_line_length = 60.0;
  if (!hough_segments(empty, params).empty()) return "segments reported on an empty edge map";

  RngStream rng(303);
  const int size = 512;
  int recovered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // theta is drawn on the accumulator grid: one-bin recovery is only
    // defined up to the grid, and an off-grid theta skews the peak's rho
    // by (segment-midpoint offset) * (sub-bin theta error), which can
    // exceed a bin for long lines regardless of implementation.
    const double theta = static_cast<double>(rng.uniform_int(0, 179)) * (kPi / 180.0);
    const double x0 = rng.uniform(128.0, 384.0);
    const double y0 = rng.uniform(128.0, 384.0);
    const double rho = x0 * std::cos(theta) + y0 * std::sin(theta);

    EdgeMap edges(size, size);
    const double ct = std::cos(theta), st = std::sin(theta);
    for (int major = 0; major < size; ++major) {
      int x, y;
      if (std::abs(st) >= std::abs(ct)) {
        x = major;
        y = static_cast<int>(std::lround((rho - x * ct) / st));
      } else {
        y = major;
        x = static_cast<int>(std::lround((rho - y * st) / ct));
      }
      if (x >= 0 && x < size && y >= 0 && y < size) edges.set(x, y);
    }

    const HoughAccumulator acc = hough_accumulate(edges, params);
    const auto peak = acc.best();
    const double got_theta = acc.theta_of(peak.theta_idx);
    const double got_rho = acc.rho_of(peak.rho_idx);
    // (rho, theta) and (-rho, theta +- pi) describe the same line.
    const auto close = [&](double r, double t) {
      return std::abs(got_rho - r) <= acc.rho_resolution + 1e-9 &&
             std::abs(got_theta - t) <= acc.theta_resolution + 1e-9;
    };
    if (close(rho, theta) || close(-rho, theta - kPi) || close(-rho, theta + kPi)) ++recovered;
  }
  if (recovered != 50) return format("peak within one bin on only %d/50 lines", recovered);
  return "ok: 50/50 peaks within one (rho, theta) bin; empty map clean";
}

std::string criterion4_geometry_oracles() {
  RngStream rng(404);
  int hull_cases = 0;
  while (hull_cases < 1000) {
    const int n = static_cast<int>(rng.uniform_int(3, 24));
    std::vector<Vec2> pts;
    const bool gridded = rng.bernoulli(0.5); // integer grids force collinear runs
    for (int i = 0; i < n; ++i) {
      if (gridded)
        pts.push_back({static_cast<double>(rng.uniform_int(0, 9)),
                       static_cast<double>(rng.uniform_int(0, 9))});
      else
        pts.push_back({rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
    }
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) continue;

    std::optional<Polygon> hull;
    try {
      hull.emplace(convex_hull(pts));
    } catch (const DegenerateInput&) {
      // Oracle view of degeneracy: fewer than 3 corner points.
      const auto edges = oracle::hull_edges(pts);
      std::set<int> corners;
      for (const auto& [a, b] : edges) {
        corners.insert(a);
        corners.insert(b);
      }
      bool collinear = true;
      if (corners.size() >= 3) {
        // All corner points on one line?
        std::vector<Vec2> cp;
        for (const int i : corners) cp.push_back(pts[static_cast<size_t>(i)]);
        for (size_t k = 2; k < cp.size() && collinear; ++k) {
          const double c = (cp[1].x - cp[0].x) * (cp[k].y - cp[0].y) -
                           (cp[1].y - cp[0].y) * (cp[k].x - cp[0].x);
          if (c != 0.0) collinear = false;
        }
      }
      if (!collinear) return "convex_hull rejected a non-degenerate input";
      ++hull_cases;
      continue;
    }

    const auto edges = oracle::hull_edges(pts);
    const auto& v = hull->vertices();
    if (edges.size() != v.size())
      return format("hull edge count %zu != oracle %zu (case %d)", v.size(), edges.size(),
                    hull_cases);
    const auto index_of = [&](Vec2 p) {
      for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == p) return static_cast<int>(i);
      return -1;
    };
    for (size_t i = 0; i < v.size(); ++i) {
      const int a = index_of(v[i]);
      const int b = index_of(v[(i + 1) % v.size()]);
      if (a < 0 || b < 0 || !edges.count({a, b}))
        return format("hull edge missing from the oracle set (case %d)", hull_cases);
    }
    ++hull_cases;
  }

  int contains_cases = 0;
  while (contains_cases < 1000) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 14; ++i) pts.push_back({rng.uniform(0.0, 80.0), rng.uniform(0.0, 80.0)});
    std::optional<Polygon> hull;
    try {
      hull.emplace(convex_hull(pts));
    } catch (const DegenerateInput&) {
      continue;
    }
    const oracle::RasterizedContainment grid(*hull, 1.0);
    for (int q = 0; q < 40 && contains_cases < 1000; ++q) {
      const Vec2 p{rng.uniform(-8.0, 88.0), rng.uniform(-8.0, 88.0)};
      if (distance_to_boundary(*hull, p) <= 1.0) continue; // oracle resolution
      if (contains(*hull, p, 1e-9) != grid.lookup(p))
        return format("contains mismatch at (%.3f, %.3f)", p.x, p.y);
      ++contains_cases;
    }
  }
  return "ok: 1000/1000 hull cases and 1000/1000 containment cases agree";
}

std::string criterion5_identity_partition() {
  // Partition rate over uniform court points at band fraction 0.20.
  const Polygon hull({{0, 0}, {400, 0}, {400, 400}, {0, 400}});
  const CourtRegion region{hull, bbox_of(hull), Rect{0, 0, 400, 400},
                           shrink_toward_centroid(hull, std::sqrt(0.8)), 0.2, false};
  RngStream rng(505);
  const oracle::RasterizedContainment grid(region.interior, 1.0);
  int players = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Vec2 p{rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)};
    Annotation a;
    a.bbox = {p.x - 5, p.y - 20, 10, 20};
    const bool player = classify(a, region, "human") == Identity::Player;
    if (player) ++players;
    if (distance_to_boundary(region.interior, p) > 1.0 && player != grid.lookup(p))
      return format("classify disagrees with the rasterized oracle at (%.2f, %.2f)", p.x, p.y);
  }
  const double rate = static_cast<double>(players) / n;
  if (rate < 0.77 || rate > 0.83)
    return format("player rate %.4f outside 0.80 +- 0.03", rate);

  // Paste/classify round trip over an augmented corpus.
  SynthDatasetParams sp;
  sp.n_train = 6;
  sp.n_val = 0;
  sp.n_test = 0;
  const SynthDataset synth = make_synth_dataset(sp);
  const auto regions = truth_regions(synth);
  CopyPasteConfig cfg;
  cfg.duplication = 3;
  const auto load = [&](const ImageRecord& im) {
    return synth.images[static_cast<size_t>(im.id - 1)];
  };
  const auto sink = [](const ImageRecord&, const Raster&) {};
  const Dataset out = augment_dataset(synth.dataset, regions, load, sink, cfg, 77, false, 2);
  int pasted = 0;
  for (const auto& ann : out.annotations) {
    if (!ann.extra.contains("cp_identity")) continue;
    ++pasted;
    const ImageRecord* im = out.find_image(ann.image_id);
    int src_id = 0;
    std::sscanf(im->file_name.c_str(), "synth_%d", &src_id);
    const Identity got = classify(ann, regions.at(src_id), out.category_name(ann.category_id));
    if (to_string(got) != ann.extra["cp_identity"].get<std::string>())
      return format("pasted annotation %d re-classified as %s, planned %s", ann.id,
                    to_string(got).c_str(), ann.extra["cp_identity"].get<std::string>().c_str());
  }
  if (pasted < 18) return format("only %d pasted objects exercised", pasted);
  return format("ok: player rate %.4f, oracle agreement 10000/10000, %d/%d paste round trips",
                rate, pasted, pasted);
}

std::string criterion6_master_invariant() {
  SynthDatasetParams sp;
  sp.n_train = 50;
  sp.n_val = 0;
  sp.n_test = 0;
  sp.width = 640;
  sp.height = 360;
  sp.seed = 606;
  const SynthDataset synth = make_synth_dataset(sp);
  const auto regions = truth_regions(synth);

  std::map<int, Identity> identities;
  for (const auto& [ann_id, name] : synth.identities)
    identities.emplace(ann_id, identity_from_string(name));
  const auto image_of = [&](const ImageRecord& im) -> const Raster& {
    return synth.images[static_cast<size_t>(im.id - 1)];
  };
  const auto pool = harvest(synth.dataset, image_of, identities);

  RngStream rng(607);
  CopyPasteConfig paste_cfg;
  OnlineAugConfig online_cfg;
  int checked = 0;
  const auto verify = [&](const Dataset& ds, const char* stage, int image_id) -> std::string {
    for (const auto& ann : ds.annotations) {
      if (ann.image_id != image_id) continue;
      ++checked;
      if (const auto viol = annotation_violation(ds, ann))
        return std::string(stage) + ": " + *viol;
    }
    return "";
  };

  for (const auto& im : synth.dataset.images) {
    Dataset sample;
    sample.categories = synth.dataset.categories;
    sample.images.push_back(im);
    for (const auto& ann : synth.dataset.annotations)
      if (ann.image_id == im.id) sample.annotations.push_back(ann);
    Raster pixels = synth.images[static_cast<size_t>(im.id - 1)];

    // crop
    const Rect r{static_cast<int>(rng.uniform_int(0, 60)), static_cast<int>(rng.uniform_int(0, 40)),
                 static_cast<int>(rng.uniform_int(400, 600)),
                 static_cast<int>(rng.uniform_int(240, 340))};
    transform_crop(sample, im.id, r);
    pixels = crop(pixels, r);
    if (auto err = verify(sample, "crop", im.id); !err.empty()) return err;

    // flip
    transform_hflip(sample, im.id);
    pixels = hflip(pixels);
    if (auto err = verify(sample, "flip", im.id); !err.empty()) return err;

    // resize
    const double sx = rng.uniform(0.6, 1.8);
    const double sy = rng.uniform(0.6, 1.8);
    transform_resize(sample, im.id, sx, sy);
    pixels = resize(pixels, sample.images[0].width, sample.images[0].height);
    if (auto err = verify(sample, "resize", im.id); !err.empty()) return err;

    // paste
    const InstancePatch& patch = pool[static_cast<size_t>(rng.uniform_int(
        0, static_cast<int64_t>(pool.size()) - 1))];
    const PastePlan plan{im.id,
                         rng.uniform(20.0, sample.images[0].width - 20.0),
                         rng.uniform(30.0, sample.images[0].height - 5.0),
                         rng.uniform(0.8, 1.25), rng.bernoulli(0.5)};
    RngStream paste_rng = rng.child("paste").child(static_cast<uint64_t>(im.id));
    try {
      paste(pixels, sample, patch, plan, paste_rng, paste_cfg);
    } catch (const OutOfFrame&) {
      // Anchor too close to the top edge for the scaled patch; fine.
    }
    if (auto err = verify(sample, "paste", im.id); !err.empty()) return err;

    // online chain
    RngStream online_rng = RngStream(608).child(static_cast<uint64_t>(im.id));
    const OnlineResult r2 = run_online(pixels, std::move(sample), im.id, online_rng, online_cfg);
    if (auto err = verify(r2.sample, "online", im.id); !err.empty()) return err;
  }
  return format("ok: %d annotation checks across 50 images, zero violations", checked);
}

std::string criterion7_online_constants() {
  OnlineAugConfig cfg;
  RngStream rng(707);
  int flips = 0, first = 0;
  const int n = 10000;
  double worst_ratio_err = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream sample_rng = rng.child(static_cast<uint64_t>(i));
    const AugmentTrace t = draw_online_plan(sample_rng, cfg);
    if (t.flip) ++flips;
    if (t.resize_h == 800) ++first;
    const double ratio = static_cast<double>(t.crop.area()) /
                         (static_cast<double>(t.resize_w) * t.resize_h);
    worst_ratio_err = std::max(worst_ratio_err, std::abs(ratio - 0.70));
  }
  const double flip_rate = static_cast<double>(flips) / n;
  const double split = static_cast<double>(first) / n;
  if (flip_rate < 0.48 || flip_rate > 0.52) return format("flip rate %.4f outside 0.50 +- 0.02", flip_rate);
  if (split < 0.48 || split > 0.52) return format("resize split %.4f outside 0.50 +- 0.02", split);
  if (worst_ratio_err > 0.001)
    return format("crop retained area off by %.5f (budget 0.001)", worst_ratio_err);

  // Duplication default reproduces the 10x record count.
  if (CopyPasteConfig{}.duplication != 10)
    return format("default duplication is %d, not 10", CopyPasteConfig{}.duplication);
  SynthDatasetParams sp;
  sp.n_train = 2;
  sp.n_val = 0;
  sp.n_test = 0;
  const SynthDataset synth = make_synth_dataset(sp);
  const auto regions = truth_regions(synth);
  const auto load = [&](const ImageRecord& im) {
    return synth.images[static_cast<size_t>(im.id - 1)];
  };
  const Dataset out = augment_dataset(synth.dataset, regions, load,
                                      [](const ImageRecord&, const Raster&) {}, CopyPasteConfig{},
                                      1, false, 2);
  if (out.images.size() != 20)
    return format("duplication produced %zu records from 2 train images", out.images.size());
  return format("ok: flip %.4f, split %.4f, worst area err %.5f, 2 images -> 20 records",
                flip_rate, split, worst_ratio_err);
}

std::string criterion8_gridmask_coverage() {
  // 1248x864 = 1.08 MP; the 96 px period divides both sides, so border
  // effects vanish and the budget is pure quantization.
  const int W = 1248, H = 864;
  std::string detail = "ok:";
  for (const double r : {0.3, 0.5, 0.7}) {
    GridMaskConfig cfg;
    cfg.ratio = r;
    cfg.d_min = cfg.d_max = 96;
    cfg.rotate_max_deg = 0.0;
    cfg.apply_prob = 1.0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const GridMaskDraw draw = [&] {
        RngStream rng(808 + seed);
        return draw_gridmask(rng, cfg);
      }();
      const Mask m = gridmask_mask(W, H, draw, cfg.ratio);
      const double fraction = static_cast<double>(m.popcount()) / (static_cast<double>(W) * H);
      const double want = (1.0 - r) * (1.0 - r);
      if (std::abs(fraction - want) > 0.02)
        return format("r=%.1f seed %llu: erased %.4f vs (1-r)^2 = %.4f",
                      r, static_cast<unsigned long long>(seed), fraction, want);
      if (seed == 0) detail += format(" r=%.1f->%.4f", r, fraction);
    }
  }
  return detail + " (each within 0.02 of (1-r)^2)";
}

std::string criterion9_pipeline_determinism() {
  const fs::path base = fs::temp_directory_path() / "court_prior_acceptance_det";
  fs::remove_all(base);
  fs::create_directories(base);
  SynthDatasetParams sp;
  sp.n_train = 4;
  sp.n_val = 1;
  sp.n_test = 1;
  sp.seed = 909;
  write_corpus(make_synth_dataset(sp), base);

  const auto run = [&](const std::string& name, int threads) -> fs::path {
    const fs::path out = base / name;
    const std::string cmd = std::string(COURT_PRIOR_BIN) + " pipeline --dataset " +
                            (base / "annotations.json").string() + " --images " +
                            (base / "images").string() + " --out-dir " + out.string() +
                            " --seed 17 --threads " + std::to_string(threads) +
                            " --set copypaste.duplication=2 2>/dev/null";
    if (WEXITSTATUS(std::system(cmd.c_str())) != 0)
      throw Error("pipeline run failed: " + cmd);
    return out;
  };

  const auto a = tree_bytes(run("run_a_t1", 1));
  const auto b = tree_bytes(run("run_b_t1", 1));
  const auto c = tree_bytes(run("run_c_t8", 8));
  if (a != b) return "two single-threaded runs differ";
  if (a != c) return "thread counts 1 and 8 differ";
  const size_t files = a.size();
  fs::remove_all(base);
  return format("ok: %zu output files byte-identical across reruns and threads {1, 8}", files);
}

std::string criterion10_roi_round_trip() {
  RngStream rng(1010);
  double worst = 0.0;
  int cases = 0;
  while (cases < 1000) {
    const Rect crop{static_cast<int>(rng.uniform_int(0, 300)),
                    static_cast<int>(rng.uniform_int(0, 200)),
                    static_cast<int>(rng.uniform_int(200, 2400)),
                    static_cast<int>(rng.uniform_int(200, 1400))};
    RoiTransform t;
    t.crop = crop;
    const int long_side = std::max(crop.w, crop.h);
    const int max_side = static_cast<int>(rng.uniform_int(400, 1400));
    if (long_side > max_side) {
      const double s = static_cast<double>(max_side) / long_side;
      t.roi_w = std::max(1, static_cast<int>(std::lround(crop.w * s)));
      t.roi_h = std::max(1, static_cast<int>(std::lround(crop.h * s)));
      t.scale_x = static_cast<double>(t.roi_w) / crop.w;
      t.scale_y = static_cast<double>(t.roi_h) / crop.h;
    } else {
      t.roi_w = crop.w;
      t.roi_h = crop.h;
    }
    for (int q = 0; q < 20 && cases < 1000; ++q, ++cases) {
      Detection d;
      const double x = rng.uniform(0.0, t.roi_w * 0.8);
      const double y = rng.uniform(0.0, t.roi_h * 0.8);
      d.bbox = {x, y, rng.uniform(0.5, t.roi_w - x), rng.uniform(0.5, t.roi_h - y)};
      d.segmentation = {{x, y, x + 2, y, x + 1, y + 2}};
      const Detection back = map_back(d, t);
      const Vec2 p = roi_forward({back.bbox[0], back.bbox[1]}, t);
      const Vec2 q2 = roi_forward({back.segmentation[0][4], back.segmentation[0][5]}, t);
      worst = std::max({worst, std::abs(p.x - d.bbox[0]), std::abs(p.y - d.bbox[1]),
                        std::abs(q2.x - d.segmentation[0][4]),
                        std::abs(q2.y - d.segmentation[0][5])});
    }
  }
  if (worst >= 0.5) return format("round-trip error %.4f px (budget 0.5)", worst);

  // Stats machinery against a hand computation on detected regions.
  SynthDatasetParams sp;
  sp.n_train = 5;
  sp.n_val = 2;
  sp.n_test = 2;
  sp.seed = 1011;
  const SynthDataset synth = make_synth_dataset(sp);
  PipelineConfig cfg;
  cfg.threads = 2;
  const fs::path dir = fs::temp_directory_path() / "court_prior_acceptance_stats";
  fs::remove_all(dir);
  write_corpus(synth, dir);
  const auto records = detect_regions_for_dataset(synth.dataset, dir / "images", cfg);
  const auto regions = match_regions(synth.dataset, records);
  const std::string chart = stats_stage(synth.dataset, regions, dir / "report.csv");
  (void)chart;

  // Hand computation, independent grouping and summation in id order.
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> hand;
  for (const auto& im : synth.dataset.images) {
    const Rect& c = regions.at(im.id).crop;
    auto& slot = hand[{im.court_label, im.split}];
    slot.first += static_cast<double>(c.area()) / (static_cast<double>(im.width) * im.height);
    slot.second += 1;
  }
  std::ifstream csv(dir / "report.csv");
  std::string line;
  std::getline(csv, line); // header
  int rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string court, split, images_s, ratio_s;
    std::getline(ss, court, ',');
    std::getline(ss, split, ',');
    std::getline(ss, images_s, ',');
    std::getline(ss, ratio_s, ',');
    const auto it = hand.find({court, split});
    if (it == hand.end()) return "stats row with unexpected group " + court + "/" + split;
    const double want = it->second.first / it->second.second;
    const double got = std::stod(ratio_s);
    if (got != want)
      return format("stats %s/%s mean %.17g != hand %.17g", court.c_str(), split.c_str(), got,
                    want);
    ++rows;
  }
  fs::remove_all(dir);
  if (rows != static_cast<int>(hand.size()))
    return format("stats rows %d != hand groups %zu", rows, hand.size());
  return format("ok: worst round-trip %.4f px; %d stats rows match the hand computation exactly",
                worst, rows);
}

std::string criterion11_end_to_end() {
  const auto start = Clock::now();
  SynthDatasetParams sp;
  sp.n_train = 184;
  sp.n_val = 62;
  sp.n_test = 64;
  sp.width = 960;
  sp.height = 540;
  sp.seed = 1111;
  const SynthDataset synth = make_synth_dataset(sp);

  const fs::path dir = fs::temp_directory_path() / "court_prior_acceptance_e2e";
  fs::remove_all(dir);
  write_corpus(synth, dir);

  PipelineConfig cfg;
  cfg.seed = 23;
  cfg.threads = 0; // auto
  run_full_pipeline(synth.dataset, dir / "images", dir / "out", cfg);

  const Dataset out = load_dataset(dir / "out" / "augmented" / "annotations.json");
  const size_t want_images = (184 + 62) * 10 + 64;
  std::string err;
  if (out.images.size() != want_images)
    err = format("augmented dataset has %zu images, expected %zu", out.images.size(), want_images);
  size_t roi_pngs = 0;
  for (const auto& entry : fs::directory_iterator(dir / "out" / "roi"))
    if (entry.path().extension() == ".png") ++roi_pngs;
  if (err.empty() && roi_pngs != 64)
    err = format("roi stage wrote %zu images, expected 64", roi_pngs);

  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_gb = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
  fs::remove_all(dir);

  if (!err.empty()) return err;
  if (secs >= 600.0) return format("run took %.1f s (budget 600)", secs);
  if (peak_gb >= 2.0) return format("peak memory %.2f GB (budget 2)", peak_gb);
  return format("ok: 310-image corpus, %zu output records, %.1f s, peak %.2f GB", want_images,
                secs, peak_gb);
}

} // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "court-detection formula fidelity", criterion1_formula_fidelity},
      {2, "static-margin fallback exactness", criterion2_fallback_exactness},
      {3, "Hough peak recovery", criterion3_hough_recovery},
      {4, "geometry oracle equivalence", criterion4_geometry_oracles},
      {5, "identity partition and paste round trip", criterion5_identity_partition},
      {6, "annotation master invariant", criterion6_master_invariant},
      {7, "online-chain constants", criterion7_online_constants},
      {8, "GridMask coverage", criterion8_gridmask_coverage},
      {9, "pipeline determinism", criterion9_pipeline_determinism},
      {10, "ROI round trip and stats exactness", criterion10_roi_round_trip},
      {11, "end-to-end desk-scale run", criterion11_end_to_end},
  };

  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  bool all_ok = true;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const bool ok = detail.rfind("ok", 0) == 0;
    all_ok = all_ok && ok;
    std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
