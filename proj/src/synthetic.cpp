#include "craq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "craq/image_io.hpp"
#include "craq/ops.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace craq {

ColorField composite_crack(const ColorField &patch, const ScalarField &mask,
                           const CrackOverlaySpec &spec) {
  require_same_shape(patch, mask, "composite_crack");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
    throw numeric_error("composite_crack: alpha out of (0,1]");
  if (!(spec.strength > 0.0 && spec.strength <= 1.0))
    throw numeric_error("composite_crack: strength out of (0,1]");
  for (double m : mask.data)
    if (m != 0.0 && m != 1.0)
      throw numeric_error("composite_crack: mask must be binary");

  const ScalarField lum = to_grayscale(patch);
  double mean = 0.0;
  for (double l : lum.data)
    mean += l;
  mean /= lum.size();
  const double crack_color = mean > spec.polarity_threshold ? 0.0 : 1.0;

  ColorField out = patch;
  for (int y = 0; y < patch.height; ++y)
    for (int x = 0; x < patch.width; ++x) {
      if (mask.at(y, x) == 0.0)
        continue;
      for (int c = 0; c < 3; ++c) {
        const double p = patch.at(y, x, c);
        const double blend = p + spec.strength * (crack_color - p);
        const double v = (1.0 - spec.alpha) * p + spec.alpha * blend;
        out.at(y, x, c) = std::clamp(v, 0.0, 1.0);
      }
    }
  return out;
}

ScalarField resize_nearest(const ScalarField &src, int height, int width) {
  ScalarField out(height, width);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height - 1,
                            static_cast<int>(static_cast<double>(y) * src.height / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width - 1,
                              static_cast<int>(static_cast<double>(x) * src.width / width));
      out.at(y, x) = src.at(sy, sx);
    }
  }
  return out;
}

ScalarField random_crack_mask(int height, int width, Rng &rng) {
  ScalarField mask(height, width, 0.0);
  const int n_walks = rng.randint(1, 3);
  for (int wlk = 0; wlk < n_walks; ++wlk) {
    double y = rng.uniform(0.1, 0.9) * height;
    double x = rng.uniform(0.1, 0.9) * width;
    double heading = rng.uniform(0.0, 6.283185307179586);
    const double curvature = rng.uniform(0.05, 0.25);
    const int steps = rng.randint((height + width) / 2, height + width);
    const bool thick = rng.u01() < 0.35;
    for (int t = 0; t < steps; ++t) {
      const int iy = static_cast<int>(std::floor(y));
      const int ix = static_cast<int>(std::floor(x));
      if (iy < 0 || iy >= height || ix < 0 || ix >= width)
        break;
      mask.at(iy, ix) = 1.0;
      if (thick && ix + 1 < width)
        mask.at(iy, ix + 1) = 1.0;
      heading += curvature * rng.normal();
      y += std::sin(heading);
      x += std::cos(heading);
      // occasional branch: restart heading sideways from the current point
      if (rng.u01() < 0.004)
        heading += rng.u01() < 0.5 ? 1.5707963267948966 : -1.5707963267948966;
    }
  }
  // guarantee at least one crack pixel so F1 against the mask is defined
  if (std::none_of(mask.data.begin(), mask.data.end(),
                   [](double v) { return v == 1.0; })) {
    for (int x = width / 4; x < 3 * width / 4; ++x)
      mask.at(height / 2, x) = 1.0;
  }
  return mask;
}

ColorField synth_clean_patch(int height, int width, Rng &rng) {
  // Shared low-frequency structure plus small per-channel tints; keeps the
  // patch smooth enough for a coarse background model while staying colorful.
  const int n_waves = 4;
  struct Wave {
    double fy, fx, phase, amp;
  };
  std::vector<Wave> waves(n_waves);
  for (auto &wv : waves) {
    wv.fy = rng.uniform(0.5, 3.0) * 6.283185307179586 / height;
    wv.fx = rng.uniform(0.5, 3.0) * 6.283185307179586 / width;
    wv.phase = rng.uniform(0.0, 6.283185307179586);
    wv.amp = rng.uniform(0.03, 0.12);
  }
  const double base = rng.uniform(0.45, 0.8);
  double tint[3];
  for (double &t : tint)
    t = rng.uniform(-0.08, 0.08);
  const double noise_amp = rng.uniform(0.0, 0.015);

  ColorField out(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = base;
      for (const auto &wv : waves)
        v += wv.amp * std::cos(wv.fy * y + wv.fx * x + wv.phase);
      const double n = noise_amp * rng.normal();
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = std::clamp(v + tint[c] + n, 0.0, 1.0);
    }
  return out;
}

namespace {

std::vector<std::string> list_images(const std::string &dir) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir))
    return files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file())
      continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

json entry_to_json(const ManifestEntry &e) {
  json j;
  j["clean"] = e.clean;
  j["mask"] = e.mask;
  j["out"] = e.out;
  j["alpha"] = e.alpha;
  j["strength"] = e.strength;
  j["polarity"] = e.polarity;
  j["seed"] = e.seed;
  if (e.skipped)
    j["skipped"] = true;
  if (!e.note.empty())
    j["note"] = e.note;
  return j;
}

} // namespace

DatasetManifest generate_dataset(const std::string &clean_dir,
                                 const std::string &mask_dir,
                                 const std::string &out_dir,
                                 const DatasetSpec &spec) {
  const std::vector<std::string> cleans = list_images(clean_dir);
  if (cleans.empty())
    throw io_error("generate_dataset: no images in clean dir '" + clean_dir + "'");
  const std::vector<std::string> masks = list_images(mask_dir);
  const bool procedural = masks.empty();

  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "masks");

  Rng rng(spec.seed);
  DatasetManifest manifest;
  for (size_t i = 0; i < cleans.size(); ++i) {
    ManifestEntry entry;
    entry.clean = cleans[i];
    entry.seed = spec.seed;

    ColorField patch;
    try {
      patch = load_image(cleans[i]);
    } catch (const std::exception &ex) {
      entry.skipped = true;
      entry.note = ex.what();
      std::cerr << "warning: skipping " << cleans[i] << ": " << ex.what() << "\n";
      manifest.entries.push_back(entry);
      ++manifest.skipped;
      continue;
    }

    ScalarField mask;
    if (procedural) {
      mask = random_crack_mask(patch.height, patch.width, rng);
      entry.note = "procedural line-crack generator";
    } else {
      const std::string &mask_path = masks[rng.randint(0, static_cast<int>(masks.size()) - 1)];
      entry.note = "mask source: " + mask_path;
      try {
        ScalarField loaded = load_image_gray(mask_path);
        if (loaded.height != patch.height || loaded.width != patch.width)
          loaded = resize_nearest(loaded, patch.height, patch.width);
        mask = binarize(loaded, 0.5);
      } catch (const std::exception &ex) {
        entry.skipped = true;
        entry.note = ex.what();
        std::cerr << "warning: skipping " << mask_path << ": " << ex.what() << "\n";
        manifest.entries.push_back(entry);
        ++manifest.skipped;
        continue;
      }
    }
    // the mask written next to the output is the evaluation ground truth

    CrackOverlaySpec overlay;
    overlay.alpha = rng.uniform(spec.alpha_min, spec.alpha_max);
    overlay.strength = rng.uniform(spec.strength_min, spec.strength_max);
    overlay.polarity_threshold = spec.polarity_threshold;
    overlay.seed = spec.seed;

    const ColorField cracked = composite_crack(patch, mask, overlay);

    const std::string stem = fs::path(cleans[i]).stem().string();
    const std::string out_img = (fs::path(out_dir) / (stem + "_cracked.png")).string();
    const std::string out_mask = (fs::path(out_dir) / "masks" / (stem + "_mask.png")).string();
    save_image(cracked, out_img);
    save_image(mask, out_mask);

    // polarity recomputed the same way composite_crack decides it
    const ScalarField lum = to_grayscale(patch);
    double mean = 0.0;
    for (double l : lum.data)
      mean += l;
    mean /= lum.size();

    entry.out = out_img;
    entry.mask = out_mask;
    entry.alpha = overlay.alpha;
    entry.strength = overlay.strength;
    entry.polarity = mean > spec.polarity_threshold ? 0 : 1;
    manifest.entries.push_back(entry);
    ++manifest.generated;
  }

  write_manifest(manifest, (fs::path(out_dir) / "manifest.jsonl").string());
  return manifest;
}

void write_manifest(const DatasetManifest &manifest, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw io_error("cannot write manifest: " + path);
  for (const auto &e : manifest.entries)
    out << entry_to_json(e).dump() << "\n";
}

DatasetManifest read_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot read manifest: " + path);
  DatasetManifest manifest;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const json j = json::parse(line);
    ManifestEntry e;
    e.clean = j.value("clean", "");
    e.mask = j.value("mask", "");
    e.out = j.value("out", "");
    e.alpha = j.value("alpha", 0.0);
    e.strength = j.value("strength", 0.0);
    e.polarity = j.value("polarity", 0);
    e.seed = j.value("seed", static_cast<uint64_t>(0));
    e.skipped = j.value("skipped", false);
    e.note = j.value("note", "");
    manifest.entries.push_back(std::move(e));
    if (manifest.entries.back().skipped)
      ++manifest.skipped;
    else
      ++manifest.generated;
  }
  return manifest;
}

} // namespace craq
