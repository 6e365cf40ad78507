#ifndef CRAQ_SYNTHETIC_HPP
#define CRAQ_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "craq/field.hpp"
#include "craq/rng.hpp"

namespace craq {

/// Alpha-compositing parameters for one crack overlay.
struct CrackOverlaySpec {
  double alpha = 0.8;               // compositing opacity, (0,1]
  double strength = 0.8;            // intensity shift toward the crack color, (0,1]
  double polarity_threshold = 0.5;  // mean-luminance cut between dark/bright cracks
  uint64_t seed = 0;
};

/// Blend a binary crack mask into a patch. The crack is dark when the patch's
/// mean luminance exceeds the polarity threshold and bright otherwise; pixels
/// off the mask are returned unchanged.
ColorField composite_crack(const ColorField &patch, const ScalarField &mask,
                           const CrackOverlaySpec &spec);

struct ManifestEntry {
  std::string clean;
  std::string mask;
  std::string out;
  double alpha = 0.0;
  double strength = 0.0;
  int polarity = 0; // 0 = dark crack, 1 = bright crack
  uint64_t seed = 0;
  bool skipped = false;
  std::string note;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  int generated = 0;
  int skipped = 0;
};

struct DatasetSpec {
  double alpha_min = 0.6;
  double alpha_max = 0.95;
  double strength_min = 0.5;
  double strength_max = 1.0;
  double polarity_threshold = 0.5;
  uint64_t seed = 0;
};

/// Overlay a randomly chosen mask (seeded) onto every clean patch in
/// clean_dir, writing images, masks and a JSON-lines manifest into out_dir.
/// Masks are resized by nearest neighbor when shapes differ. When mask_dir is
/// empty, procedurally generated line cracks are used instead and noted in
/// the manifest. Unreadable inputs are skipped with a warning entry.
DatasetManifest generate_dataset(const std::string &clean_dir,
                                 const std::string &mask_dir,
                                 const std::string &out_dir,
                                 const DatasetSpec &spec);

void write_manifest(const DatasetManifest &manifest, const std::string &path);
DatasetManifest read_manifest(const std::string &path);

/// Procedural crack mask: a few random walks with curvature noise, optionally
/// thickened. Binary {0,1}, deterministic given the rng state.
ScalarField random_crack_mask(int height, int width, Rng &rng);

/// Smooth painting-like clean patch: low-frequency cosine mixture per channel
/// with mild texture noise, samples in [0,1].
ColorField synth_clean_patch(int height, int width, Rng &rng);

/// Nearest-neighbor resample used for mask shape adaptation.
ScalarField resize_nearest(const ScalarField &src, int height, int width);

} // namespace craq

#endif
