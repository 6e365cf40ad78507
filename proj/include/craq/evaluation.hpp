#ifndef CRAQ_EVALUATION_HPP
#define CRAQ_EVALUATION_HPP

#include <utility>
#include <vector>

#include "craq/field.hpp"

namespace craq {

struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;
};

ConfusionCounts confusion(const ScalarField &pred, const ScalarField &truth);

/// 2 tp / (2 tp + fp + fn); both-empty case returns 1 (perfect agreement).
double f1_score(const ScalarField &pred, const ScalarField &truth);
double precision(const ConfusionCounts &c);
double recall(const ConfusionCounts &c);

/// Mean binary cross-entropy; predictions clamped to [1e-7, 1 - 1e-7].
double bce_metric(const ScalarField &pred_soft, const ScalarField &truth);

/// Sum of absolute sample differences.
double l1_metric(const ColorField &a, const ColorField &b);

struct TilingSpec {
  int patch_size = 512;
  int overlap = 64;
};

struct Tile {
  ColorField patch;
  int offset_y = 0;
  int offset_x = 0;
};

/// Overlapping grid of full-size patches with stride patch_size - overlap;
/// the final row/column is shifted inward so every pixel is covered. Images
/// smaller than patch_size in either dimension yield one whole-image tile.
std::vector<Tile> tile_image(const ColorField &image, const TilingSpec &spec);

/// Per-pixel mean of the covering tiles. Throws on uncovered pixels.
ScalarField merge_soft(const std::vector<std::pair<ScalarField, std::pair<int, int>>> &tiles,
                       int height, int width);

/// Per-pixel logical OR of binary tiles. Throws on uncovered pixels.
ScalarField merge_binary(const std::vector<std::pair<ScalarField, std::pair<int, int>>> &tiles,
                         int height, int width);

} // namespace craq

#endif
