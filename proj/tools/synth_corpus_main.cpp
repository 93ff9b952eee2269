// synth-corpus: deterministic synthetic court-scene dataset generator.
// Writes PNG images plus a COCO annotations.json; handy for demos and for
// exercising the pipeline without real footage.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "courtprior/log.hpp"
#include "courtprior/synth.hpp"

namespace fs = std::filesystem;
using namespace courtprior;

int main(int argc, char** argv) {
  CLI::App app{"synth-corpus: synthetic court-scene dataset generator"};
  std::string out_dir;
  int n_train = 8, n_val = 3, n_test = 3;
  int width = 960, height = 540;
  uint64_t seed = 1;
  app.add_option("--out-dir", out_dir, "Output directory")->required();
  app.add_option("--train", n_train, "Training images");
  app.add_option("--val", n_val, "Validation images");
  app.add_option("--test", n_test, "Test images");
  app.add_option("--width", width, "Image width");
  app.add_option("--height", height, "Image height");
  app.add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    SynthDatasetParams params;
    params.n_train = n_train;
    params.n_val = n_val;
    params.n_test = n_test;
    params.width = width;
    params.height = height;
    params.seed = seed;
    const SynthDataset synth = make_synth_dataset(params);

    fs::create_directories(fs::path(out_dir) / "images");
    for (size_t i = 0; i < synth.images.size(); ++i)
      save_png(synth.images[i], fs::path(out_dir) / "images" / synth.dataset.images[i].file_name);
    save_dataset(synth.dataset, fs::path(out_dir) / "annotations.json");
    log_info("synth-corpus: " + std::to_string(synth.images.size()) + " images under " + out_dir);
  } catch (const Error& e) {
    log_error(e.what());
    return 1;
  }
  return 0;
}
