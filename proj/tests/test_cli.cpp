#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "courtprior/synth.hpp"

// Binary path injected by the build so the suite can drive the real CLI.
#ifndef COURT_PRIOR_BIN
#define COURT_PRIOR_BIN "court-prior"
#endif

namespace fs = std::filesystem;
using namespace courtprior;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(COURT_PRIOR_BIN) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("court_prior_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_corpus(const fs::path& dir, int train, int val, int test, uint64_t seed) {
  SynthDatasetParams p;
  p.n_train = train;
  p.n_val = val;
  p.n_test = test;
  p.seed = seed;
  const SynthDataset synth = make_synth_dataset(p);
  fs::create_directories(dir / "images");
  for (size_t i = 0; i < synth.images.size(); ++i)
    save_png(synth.images[i], dir / "images" / synth.dataset.images[i].file_name);
  save_dataset(synth.dataset, dir / "annotations.json");
}

// Byte map of every regular file under root, keyed by relative path.
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

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("detect-court") == 2);              // missing required options
  CHECK(run_cli("frobnicate") == 2);                // unknown subcommand
  CHECK(run_cli("") == 2);                          // no subcommand
}

TEST_CASE("missing input files exit with code 1 and name the path") {
  const fs::path dir = fresh_dir("errors");
  write_corpus(dir, 1, 0, 0, 5);
  const std::string cmd = std::string(COURT_PRIOR_BIN) + " classify --dataset " +
                          (dir / "annotations.json").string() + " --regions " +
                          (dir / "nope.json").string() + " --out " + (dir / "x.json").string() +
                          " 2>" + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 1);
  std::ifstream err1(dir / "stderr.txt");
  const std::string text1((std::istreambuf_iterator<char>(err1)), std::istreambuf_iterator<char>());
  CHECK(text1.find("nope.json") != std::string::npos);

  // A readable-but-broken file is also a data error: exit 1, path in message.
  std::ofstream(dir / "broken.json") << "{not json";
  const std::string cmd2 = std::string(COURT_PRIOR_BIN) + " classify --dataset " +
                           (dir / "broken.json").string() + " --regions " +
                           (dir / "broken.json").string() + " --out " + (dir / "x.json").string() +
                           " 2>" + (dir / "stderr2.txt").string();
  const int status2 = std::system(cmd2.c_str());
  CHECK(WEXITSTATUS(status2) == 1);
  std::ifstream err(dir / "stderr2.txt");
  const std::string text((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
  CHECK(text.find("broken.json") != std::string::npos);
}

TEST_CASE("dump-config emits parseable json") {
  const fs::path dir = fresh_dir("dumpcfg");
  const std::string cmd = std::string(COURT_PRIOR_BIN) + " --dump-config >" +
                          (dir / "ref.json").string() + " 2>/dev/null";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream f(dir / "ref.json");
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"court\"") != std::string::npos);
  CHECK(text.find("\"gridmask\"") != std::string::npos);
}

TEST_CASE("pipeline equals the composition of its subcommands byte for byte") {
  const fs::path dir = fresh_dir("compose");
  write_corpus(dir, 3, 1, 1, 11);
  const std::string common = " --seed 21 --set copypaste.duplication=2 --threads 2";
  const std::string images = (dir / "images").string();
  const std::string anno = (dir / "annotations.json").string();

  const fs::path piped = dir / "piped";
  REQUIRE(run_cli("pipeline --dataset " + anno + " --images " + images + " --out-dir " +
                  piped.string() + common) == 0);

  const fs::path manual = dir / "manual";
  fs::create_directories(manual);
  REQUIRE(run_cli("detect-court --images " + images + " --dataset " + anno + " --out " +
                  (manual / "regions.json").string() + common) == 0);
  REQUIRE(run_cli("classify --dataset " + anno + " --regions " +
                  (manual / "regions.json").string() + " --out " +
                  (manual / "identities.json").string() + common) == 0);
  REQUIRE(run_cli("augment --dataset " + anno + " --images " + images + " --regions " +
                  (manual / "regions.json").string() + " --crop-to-court --out-dir " +
                  (manual / "augmented").string() + common) == 0);
  REQUIRE(run_cli("roi --images " + images + " --regions " + (manual / "regions.json").string() +
                  " --dataset " + anno + " --split test --out-dir " + (manual / "roi").string() +
                  common) == 0);

  CHECK(tree_bytes(piped) == tree_bytes(manual));
}

TEST_CASE("preview renders an overlay png") {
  const fs::path dir = fresh_dir("preview");
  write_corpus(dir, 1, 0, 0, 31);
  const fs::path out = dir / "overlay.png";
  REQUIRE(run_cli("preview --image " + (dir / "images" / "synth_0001.png").string() +
                  " --out " + out.string()) == 0);
  const Raster overlay = load_image(out);
  CHECK(overlay.width() == 960);
  CHECK(overlay.height() == 540);
  // The crop rectangle is drawn in red somewhere.
  bool red_seen = false;
  for (int y = 0; y < overlay.height() && !red_seen; ++y)
    for (int x = 0; x < overlay.width() && !red_seen; ++x)
      if (overlay.at(x, y, 0) == 230 && overlay.at(x, y, 1) == 30) red_seen = true;
  CHECK(red_seen);
}

TEST_CASE("online epoch materializes images, annotations and replayable traces") {
  const fs::path dir = fresh_dir("online");
  write_corpus(dir, 2, 0, 0, 13);
  const fs::path out = dir / "epoch";
  REQUIRE(run_cli("augment --online --dataset " + (dir / "annotations.json").string() +
                  " --images " + (dir / "images").string() + " --out-dir " + out.string() +
                  " --seed 3") == 0);
  CHECK(fs::exists(out / "annotations.json"));
  CHECK(fs::exists(out / "traces.jsonl"));
  const Dataset ds = load_dataset(out / "annotations.json");
  CHECK(ds.images.size() == 2);
  for (const auto& im : ds.images) CHECK(fs::exists(out / im.file_name));

  std::ifstream traces(out / "traces.jsonl");
  int lines = 0;
  std::string line;
  while (std::getline(traces, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 2);
}

} // TEST_SUITE
