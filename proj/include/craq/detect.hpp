#ifndef CRAQ_DETECT_HPP
#define CRAQ_DETECT_HPP

#include <memory>
#include <string>
#include <vector>

#include "craq/adam.hpp"
#include "craq/energy.hpp"
#include "craq/evaluation.hpp"
#include "craq/field.hpp"
#include "craq/priors.hpp"

namespace craq {

/// Prior selection: which generator backs B and which estimator backs P.
///   generator: "identity" | "bilinear:2" | "bilinear:4" | "bilinear:8"
///   crack:     "line-filter" | "file:<path>"
struct PriorSelection {
  std::string generator = "bilinear:4";
  std::string crack = "line-filter";
};

/// Parse one selector token into the matching slot of `sel`; throws io_error
/// on unknown names.
void apply_prior_token(PriorSelection &sel, const std::string &token);

std::unique_ptr<GeneratorPrior> make_generator(const PriorSelection &sel,
                                               int height, int width);
std::unique_ptr<CrackPrior> make_crack_prior(const PriorSelection &sel,
                                             int height, int width);

struct DetectConfig {
  EnergyParams params;
  AdamConfig adam;
  TilingSpec tiling;
  PriorSelection priors;
  /// Threshold per tile before the OR merge (local, default) or once on the
  /// averaged soft map (global).
  bool global_threshold = false;
  uint64_t seed = 0;
};

struct DetectResult {
  ScalarField soft;   // merged crack map C_pred = 1 - v, averaged in overlaps
  ScalarField binary; // merged binary crack map
  std::vector<IterationTrace> traces; // one per tile, tile scan order
};

/// Full detection: tile, solve per tile, read out C_pred = 1 - v, threshold
/// with Otsu, merge (average / logical OR).
DetectResult detect(const ColorField &image, const DetectConfig &config);

/// Input image with detected crack pixels painted in a solid marker color.
ColorField overlay_detection(const ColorField &image, const ScalarField &binary);

} // namespace craq

#endif
