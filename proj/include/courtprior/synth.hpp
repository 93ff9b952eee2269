#ifndef COURTPRIOR_SYNTH_HPP
#define COURTPRIOR_SYNTH_HPP

#include <array>
#include <string>
#include <vector>

#include "courtprior/cocodata.hpp"
#include "courtprior/geometry.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

/**
 * Synthetic court-scene rendering with exactly known geometry. Used by
 * tests and by the demo dataset generator: every drawn shape is also the
 * shape that gets annotated, so expected values can be computed by hand.
 */

struct CourtFixtureParams {
  int width = 1280;
  int height = 720;
  // Court rectangle before rotation, centered at (center_x, center_y).
  double court_w = 900.0;
  double court_h = 480.0;
  double center_x = 640.0;
  double center_y = 360.0;
  double rotation_deg = 0.0;
  double line_thickness = 4.0;
  uint8_t background = 52;
  uint8_t floor = 96;
  uint8_t line = 235;
  double noise_amplitude = 5.0; // uniform per-pixel brightness jitter
  uint64_t noise_seed = 0;
  bool center_line = true;
};

struct CourtFixture {
  Raster image;                 // RGB
  std::array<Vec2, 4> corners;  // true rotated court corners
};

CourtFixture render_court(const CourtFixtureParams& params);

struct SynthDatasetParams {
  int n_train = 8;
  int n_val = 3;
  int n_test = 3;
  int width = 960;
  int height = 540;
  uint64_t seed = 1;
  std::vector<std::string> court_labels = {"court_a", "court_b", "court_c"};
  int min_players = 4;
  int max_players = 7;
  int min_perimeter = 1;
  int max_perimeter = 3;
};

struct SynthDataset {
  Dataset dataset;
  std::vector<Raster> images;                     // parallel to dataset.images
  std::vector<std::array<Vec2, 4>> court_corners; // ground truth per image
  // Ground-truth identity per annotation id: "player" | "perimeter" | "ball".
  std::vector<std::pair<int, std::string>> identities;
};

/// Deterministic synthetic dataset: per image a rendered court plus
/// annotated humans (inside and around the court) and one ball.
SynthDataset make_synth_dataset(const SynthDatasetParams& params);

} // namespace courtprior

#endif
