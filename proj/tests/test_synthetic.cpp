#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "craq/image_io.hpp"
#include "craq/ops.hpp"
#include "craq/rng.hpp"
#include "craq/synthetic.hpp"

using namespace craq;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
} // namespace

TEST_CASE("composite_crack: identity off the mask") {
  Rng rng(2);
  ColorField patch(8, 8);
  for (double &x : patch.data)
    x = rng.u01();
  const ScalarField empty_mask(8, 8, 0.0);
  const ColorField out = composite_crack(patch, empty_mask, CrackOverlaySpec{});
  CHECK(out.data == patch.data);
}

TEST_CASE("composite_crack: luminance-adaptive polarity") {
  ScalarField mask(4, 4, 0.0);
  mask.at(1, 1) = 1.0;
  mask.at(2, 2) = 1.0;

  CrackOverlaySpec spec;
  spec.alpha = 1.0;
  spec.strength = 1.0;
  spec.polarity_threshold = 0.5;

  const ColorField bright(4, 4, 0.9);
  const ColorField dark_out = composite_crack(bright, mask, spec);
  for (int c = 0; c < 3; ++c) {
    CHECK(dark_out.at(1, 1, c) == 0.0); // dark crack on bright ground
    CHECK(dark_out.at(0, 0, c) == 0.9);
  }

  const ColorField dark(4, 4, 0.1);
  const ColorField bright_out = composite_crack(dark, mask, spec);
  for (int c = 0; c < 3; ++c)
    CHECK(bright_out.at(1, 1, c) == 1.0); // bright crack on dark ground
}

TEST_CASE("composite_crack: partial alpha blends toward the crack color") {
  ScalarField mask(1, 1, 1.0);
  CrackOverlaySpec spec;
  spec.alpha = 0.5;
  spec.strength = 1.0;
  const ColorField patch(1, 1, 0.8);
  const ColorField out = composite_crack(patch, mask, spec);
  // blend = 0 (dark), out = 0.5*0.8 + 0.5*0 = 0.4
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("composite_crack: validation") {
  ScalarField bad_mask(2, 2, 0.5);
  CHECK_THROWS_AS(composite_crack(ColorField(2, 2, 0.5), bad_mask, CrackOverlaySpec{}),
                  numeric_error);
  CrackOverlaySpec bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(composite_crack(ColorField(2, 2, 0.5), ScalarField(2, 2, 0.0), bad),
                  numeric_error);
  CHECK_THROWS_AS(composite_crack(ColorField(2, 2, 0.5), ScalarField(3, 3, 0.0),
                                  CrackOverlaySpec{}),
                  shape_error);
}

TEST_CASE("composited values stay in range") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ColorField patch(6, 6);
    for (double &x : patch.data)
      x = rng.u01();
    ScalarField mask(6, 6);
    for (double &x : mask.data)
      x = rng.u01() < 0.3 ? 1.0 : 0.0;
    CrackOverlaySpec spec;
    spec.alpha = rng.uniform(0.1, 1.0);
    spec.strength = rng.uniform(0.1, 1.0);
    const ColorField out = composite_crack(patch, mask, spec);
    for (double v : out.data) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("random_crack_mask is binary and non-empty") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField mask = random_crack_mask(32, 32, rng);
    int on = 0;
    for (double v : mask.data) {
      CHECK((v == 0.0 || v == 1.0));
      on += v == 1.0;
    }
    CHECK(on >= 1);
  }
}

TEST_CASE("synth_clean_patch stays in range") {
  Rng rng(19);
  const ColorField patch = synth_clean_patch(24, 24, rng);
  for (double v : patch.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("resize_nearest keeps masks binary") {
  Rng rng(23);
  ScalarField mask(10, 14);
  for (double &x : mask.data)
    x = rng.u01() < 0.4 ? 1.0 : 0.0;
  const ScalarField resized = resize_nearest(mask, 7, 9);
  for (double v : resized.data)
    CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("generate_dataset: determinism, ranges and fallback") {
  const fs::path base = fs::temp_directory_path() / "craq_test_synth";
  fs::remove_all(base);
  fs::create_directories(base / "clean");
  fs::create_directories(base / "masks");

  Rng rng(31);
  for (int i = 0; i < 2; ++i)
    save_image(synth_clean_patch(16, 16, rng),
               (base / "clean" / ("c" + std::to_string(i) + ".png")).string());
  save_image(random_crack_mask(16, 16, rng), (base / "masks" / "m0.png").string());

  DatasetSpec spec;
  spec.seed = 12345;
  const std::string out1 = (base / "out").string();
  const DatasetManifest m1 =
      generate_dataset((base / "clean").string(), (base / "masks").string(), out1, spec);
  CHECK(m1.generated == 2);
  CHECK(m1.skipped == 0);
  for (const auto &e : m1.entries) {
    CHECK(e.alpha >= spec.alpha_min);
    CHECK(e.alpha <= spec.alpha_max);
    CHECK(e.strength >= spec.strength_min);
    CHECK(e.strength <= spec.strength_max);
  }
  const std::string manifest1 = slurp(fs::path(out1) / "manifest.jsonl");
  const std::string img1 = slurp(m1.entries[0].out);

  // regenerate into the same directory: identical bytes
  const DatasetManifest m2 =
      generate_dataset((base / "clean").string(), (base / "masks").string(), out1, spec);
  CHECK(slurp(fs::path(out1) / "manifest.jsonl") == manifest1);
  CHECK(slurp(m2.entries[0].out) == img1);

  // round trip through the manifest reader
  const DatasetManifest parsed = read_manifest((fs::path(out1) / "manifest.jsonl").string());
  CHECK(parsed.entries.size() == 2);
  CHECK(parsed.entries[0].alpha == m1.entries[0].alpha);

  // empty mask dir falls back to the procedural generator, noted in the manifest
  const DatasetManifest fallback =
      generate_dataset((base / "clean").string(), (base / "nomasks").string(),
                       (base / "out2").string(), spec);
  CHECK(fallback.generated == 2);
  for (const auto &e : fallback.entries)
    CHECK(e.note.find("procedural") != std::string::npos);

  // empty clean dir is an error
  fs::create_directories(base / "emptyclean");
  CHECK_THROWS_AS(generate_dataset((base / "emptyclean").string(),
                                   (base / "masks").string(),
                                   (base / "out3").string(), spec),
                  io_error);
}

TEST_CASE("generate_dataset skips unreadable inputs with a manifest note") {
  const fs::path base = fs::temp_directory_path() / "craq_test_synth_bad";
  fs::remove_all(base);
  fs::create_directories(base / "clean");

  Rng rng(61);
  save_image(synth_clean_patch(12, 12, rng), (base / "clean" / "good.png").string());
  std::ofstream((base / "clean" / "broken.png").string()) << "not a png";

  DatasetSpec spec;
  spec.seed = 5;
  const DatasetManifest m =
      generate_dataset((base / "clean").string(), "", (base / "out").string(), spec);
  CHECK(m.generated == 1);
  CHECK(m.skipped == 1);
  bool found = false;
  for (const auto &e : m.entries)
    if (e.skipped && e.clean.find("broken.png") != std::string::npos)
      found = true;
  CHECK(found);
}
