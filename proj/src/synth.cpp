#include "courtprior/synth.hpp"

#include <cmath>

#include "courtprior/draw.hpp"
#include "courtprior/rng.hpp"

namespace courtprior {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<Vec2, 4> rotated_rect(double cx, double cy, double w, double h, double deg) {
  const double rad = deg * kPi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const auto rot = [&](double x, double y) -> Vec2 {
    return {cx + x * c - y * s, cy + x * s + y * c};
  };
  return {rot(-w / 2, -h / 2), rot(w / 2, -h / 2), rot(w / 2, h / 2), rot(-w / 2, h / 2)};
}

void add_noise(Raster& img, double amplitude, uint64_t seed) {
  if (amplitude <= 0.0) return;
  RngStream rng = RngStream(seed).child("pixel-noise");
  for (auto& v : img.data()) {
    const double n = rng.uniform(-amplitude, amplitude);
    v = static_cast<uint8_t>(std::clamp(v + n, 0.0, 255.0));
  }
}

// Axis-aligned octagonal "body": a rectangle with cut corners, so the
// annotation exercises non-rectangular polygons while staying convex.
std::vector<double> body_ring(double cx, double bottom_y, double w, double h) {
  const double x0 = cx - w / 2, x1 = cx + w / 2;
  const double y0 = bottom_y - h, y1 = bottom_y;
  const double cxr = std::min(4.0, w / 4);
  return {x0 + cxr, y0,      x1 - cxr, y0,      x1, y0 + cxr, x1, y1 - cxr,
          x1 - cxr, y1,      x0 + cxr, y1,      x0, y1 - cxr, x0, y0 + cxr};
}

std::vector<double> diamond_ring(double cx, double cy, double r) {
  return {cx, cy - r, cx + r, cy, cx, cy + r, cx - r, cy};
}

std::vector<Vec2> to_vecs(const std::vector<double>& flat) {
  std::vector<Vec2> out;
  out.reserve(flat.size() / 2);
  for (size_t i = 0; i + 1 < flat.size(); i += 2) out.push_back({flat[i], flat[i + 1]});
  return out;
}

} // namespace

CourtFixture render_court(const CourtFixtureParams& p) {
  Raster img(p.width, p.height, 3);
  fill(img, Color{p.background, p.background, p.background});

  const auto corners =
      rotated_rect(p.center_x, p.center_y, p.court_w, p.court_h, p.rotation_deg);
  fill_ring(img, {corners[0], corners[1], corners[2], corners[3]},
            Color{p.floor, p.floor, p.floor});

  const Color line{p.line, p.line, p.line};
  for (int i = 0; i < 4; ++i)
    stroke_line(img, corners[i], corners[(i + 1) % 4], p.line_thickness, line);
  if (p.center_line) {
    const Vec2 mid_top{(corners[0].x + corners[1].x) / 2, (corners[0].y + corners[1].y) / 2};
    const Vec2 mid_bot{(corners[2].x + corners[3].x) / 2, (corners[2].y + corners[3].y) / 2};
    stroke_line(img, mid_top, mid_bot, p.line_thickness, line);
  }

  add_noise(img, p.noise_amplitude, p.noise_seed);
  return CourtFixture{std::move(img), corners};
}

SynthDataset make_synth_dataset(const SynthDatasetParams& p) {
  SynthDataset out;
  out.dataset.categories.push_back({1, "human", {}});
  out.dataset.categories.push_back({2, "ball", {}});

  const int total = p.n_train + p.n_val + p.n_test;
  const RngStream root(p.seed);
  int next_ann_id = 1;

  for (int i = 0; i < total; ++i) {
    RngStream rng = root.child("image").child(static_cast<uint64_t>(i));
    const std::string label = p.court_labels[i % p.court_labels.size()];
    const std::string split = i < p.n_train ? "train" : (i < p.n_train + p.n_val ? "val" : "test");

    // Court size varies by label so the per-court crop statistics differ.
    const double label_factor = 0.78 - 0.08 * static_cast<double>(i % p.court_labels.size());
    CourtFixtureParams fp;
    fp.width = p.width;
    fp.height = p.height;
    fp.court_w = p.width * (label_factor + rng.uniform(-0.02, 0.02));
    fp.court_h = p.height * (label_factor + rng.uniform(-0.02, 0.02));
    fp.center_x = p.width / 2.0 + rng.uniform(-0.02, 0.02) * p.width;
    fp.center_y = p.height / 2.0 + rng.uniform(-0.02, 0.02) * p.height;
    fp.rotation_deg = rng.uniform(-2.0, 2.0);
    fp.noise_seed = p.seed * 1000 + static_cast<uint64_t>(i);
    CourtFixture fixture = render_court(fp);

    const int image_id = i + 1;
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d.png", image_id);
    out.dataset.images.push_back({image_id, name, p.width, p.height, split, label, {}});
    out.court_corners.push_back(fixture.corners);

    // Placement regions from the true geometry.
    const Polygon court({fixture.corners[0], fixture.corners[1], fixture.corners[2],
                         fixture.corners[3]});
    const Polygon interior = shrink_toward_centroid(court, std::sqrt(0.8));
    const double margin = 0.02 * std::min(fp.court_w, fp.court_h) + 6.0;
    const auto [lo, hi] = bounds_of(court);

    const auto sample_anchor = [&](bool want_interior) -> Vec2 {
      for (int attempt = 0; attempt < 4000; ++attempt) {
        const Vec2 q{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        const bool in_interior = contains_with_margin(interior, q, margin);
        const bool in_court = contains_with_margin(court, q, margin);
        if (want_interior && in_interior) return q;
        if (!want_interior && in_court && !contains(interior, q, margin)) return q;
      }
      return centroid(want_interior ? interior : court);
    };

    const auto add_annotation = [&](int category_id, std::vector<double> ring, Color color,
                                    const std::string& identity) {
      fill_ring(fixture.image, to_vecs(ring), color);
      Annotation a;
      a.id = next_ann_id++;
      a.image_id = image_id;
      a.category_id = category_id;
      a.segmentation = {std::move(ring)};
      retighten_annotation(a, p.width, p.height);
      out.identities.emplace_back(a.id, identity);
      out.dataset.annotations.push_back(std::move(a));
    };

    const int n_players = static_cast<int>(rng.uniform_int(p.min_players, p.max_players));
    for (int k = 0; k < n_players; ++k) {
      const Vec2 anchor = sample_anchor(true);
      const double bw = rng.uniform(16.0, 28.0);
      const double bh = rng.uniform(40.0, 64.0);
      const Color jersey{static_cast<uint8_t>(rng.uniform_int(120, 255)),
                         static_cast<uint8_t>(rng.uniform_int(20, 120)),
                         static_cast<uint8_t>(rng.uniform_int(20, 200))};
      add_annotation(1, body_ring(anchor.x, anchor.y, bw, bh), jersey, "player");
    }

    const int n_perimeter = static_cast<int>(rng.uniform_int(p.min_perimeter, p.max_perimeter));
    for (int k = 0; k < n_perimeter; ++k) {
      const Vec2 anchor = sample_anchor(false);
      const double bw = rng.uniform(16.0, 26.0);
      const double bh = rng.uniform(38.0, 58.0);
      const Color coat{static_cast<uint8_t>(rng.uniform_int(30, 90)),
                       static_cast<uint8_t>(rng.uniform_int(30, 90)),
                       static_cast<uint8_t>(rng.uniform_int(30, 90))};
      add_annotation(1, body_ring(anchor.x, anchor.y, bw, bh), coat, "perimeter");
    }

    {
      const Vec2 c = sample_anchor(true);
      const double r = rng.uniform(5.0, 9.0);
      add_annotation(2, diamond_ring(c.x, c.y - 20.0, r), Color{222, 120, 40}, "ball");
    }

    out.images.push_back(std::move(fixture.image));
  }
  return out;
}

} // namespace courtprior
