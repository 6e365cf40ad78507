#include "craq/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "craq/parallel.hpp"

namespace craq {

ConfusionCounts confusion(const ScalarField &pred, const ScalarField &truth) {
  require_same_shape(pred, truth, "confusion");
  ConfusionCounts c;
  for (int i = 0; i < pred.size(); ++i) {
    const bool p = pred.data[i] != 0.0;
    const bool t = truth.data[i] != 0.0;
    if (p && t)
      ++c.tp;
    else if (p && !t)
      ++c.fp;
    else if (!p && t)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

double f1_score(const ScalarField &pred, const ScalarField &truth) {
  const ConfusionCounts c = confusion(pred, truth);
  if (c.tp == 0 && c.fp == 0 && c.fn == 0)
    return 1.0;
  return 2.0 * static_cast<double>(c.tp) /
         static_cast<double>(2 * c.tp + c.fp + c.fn);
}

double precision(const ConfusionCounts &c) {
  return c.tp + c.fp == 0 ? 1.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fp);
}

double recall(const ConfusionCounts &c) {
  return c.tp + c.fn == 0 ? 1.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fn);
}

double bce_metric(const ScalarField &pred_soft, const ScalarField &truth) {
  require_same_shape(pred_soft, truth, "bce_metric");
  const int w = pred_soft.width;
  const double total = row_sum(pred_soft.height, pred_soft.size(), [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x) {
      const double p = std::clamp(pred_soft.at(y, x), 1e-7, 1.0 - 1e-7);
      const double t = truth.at(y, x);
      acc -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    }
    return acc;
  });
  return total / pred_soft.size();
}

double l1_metric(const ColorField &a, const ColorField &b) {
  require_same_shape(a, b, "l1_metric");
  const int w = a.width;
  return row_sum(a.height, a.samples(), [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        acc += std::abs(a.at(y, x, c) - b.at(y, x, c));
    return acc;
  });
}

namespace {

std::vector<int> tile_offsets(int extent, int patch, int stride) {
  std::vector<int> offs;
  for (int o = 0;; o += stride) {
    if (o + patch >= extent) {
      offs.push_back(extent - patch);
      break;
    }
    offs.push_back(o);
  }
  return offs;
}

} // namespace

std::vector<Tile> tile_image(const ColorField &image, const TilingSpec &spec) {
  if (spec.overlap < 0 || spec.overlap >= spec.patch_size)
    throw shape_error("tile_image: need 0 <= overlap < patch_size");
  std::vector<Tile> tiles;
  if (image.height < spec.patch_size || image.width < spec.patch_size) {
    tiles.push_back(Tile{image, 0, 0});
    return tiles;
  }
  const int stride = spec.patch_size - spec.overlap;
  const std::vector<int> ys = tile_offsets(image.height, spec.patch_size, stride);
  const std::vector<int> xs = tile_offsets(image.width, spec.patch_size, stride);
  for (int oy : ys)
    for (int ox : xs) {
      Tile t;
      t.offset_y = oy;
      t.offset_x = ox;
      t.patch = ColorField(spec.patch_size, spec.patch_size);
      for (int y = 0; y < spec.patch_size; ++y)
        for (int x = 0; x < spec.patch_size; ++x)
          for (int c = 0; c < 3; ++c)
            t.patch.at(y, x, c) = image.at(oy + y, ox + x, c);
      tiles.push_back(std::move(t));
    }
  return tiles;
}

ScalarField merge_soft(
    const std::vector<std::pair<ScalarField, std::pair<int, int>>> &tiles,
    int height, int width) {
  ScalarField sum(height, width, 0.0);
  ScalarField count(height, width, 0.0);
  for (const auto &[tile, off] : tiles) {
    const auto [oy, ox] = off;
    if (oy < 0 || ox < 0 || oy + tile.height > height || ox + tile.width > width)
      throw shape_error("merge_soft: tile out of bounds");
    for (int y = 0; y < tile.height; ++y)
      for (int x = 0; x < tile.width; ++x) {
        sum.at(oy + y, ox + x) += tile.at(y, x);
        count.at(oy + y, ox + x) += 1.0;
      }
  }
  ScalarField out(height, width);
  for (int i = 0; i < out.size(); ++i) {
    if (count.data[i] == 0.0)
      throw shape_error("merge_soft: uncovered pixel");
    out.data[i] = sum.data[i] / count.data[i];
  }
  return out;
}

ScalarField merge_binary(
    const std::vector<std::pair<ScalarField, std::pair<int, int>>> &tiles,
    int height, int width) {
  ScalarField out(height, width, 0.0);
  ScalarField covered(height, width, 0.0);
  for (const auto &[tile, off] : tiles) {
    const auto [oy, ox] = off;
    if (oy < 0 || ox < 0 || oy + tile.height > height || ox + tile.width > width)
      throw shape_error("merge_binary: tile out of bounds");
    for (int y = 0; y < tile.height; ++y)
      for (int x = 0; x < tile.width; ++x) {
        if (tile.at(y, x) != 0.0)
          out.at(oy + y, ox + x) = 1.0;
        covered.at(oy + y, ox + x) = 1.0;
      }
  }
  for (int i = 0; i < out.size(); ++i)
    if (covered.data[i] == 0.0)
      throw shape_error("merge_binary: uncovered pixel");
  return out;
}

} // namespace craq
