#include "craq/detect.hpp"

#include <algorithm>

#include "craq/ops.hpp"

namespace craq {

void apply_prior_token(PriorSelection &sel, const std::string &token) {
  if (token == "identity" || token == "bilinear:2" || token == "bilinear:4" ||
      token == "bilinear:8") {
    sel.generator = token;
    return;
  }
  if (token == "line-filter" || token.rfind("file:", 0) == 0) {
    sel.crack = token;
    return;
  }
  throw io_error("unknown prior '" + token +
                 "' (expected identity | bilinear:f | line-filter | file:path)");
}

std::unique_ptr<GeneratorPrior> make_generator(const PriorSelection &sel,
                                               int height, int width) {
  if (sel.generator == "identity")
    return std::make_unique<IdentityGenerator>(height, width);
  if (sel.generator.rfind("bilinear:", 0) == 0) {
    const int f = std::stoi(sel.generator.substr(9));
    return std::make_unique<BilinearGenerator>(height, width, f);
  }
  throw io_error("unknown generator prior '" + sel.generator + "'");
}

std::unique_ptr<CrackPrior> make_crack_prior(const PriorSelection &sel,
                                             int height, int width) {
  if (sel.crack == "line-filter")
    return std::make_unique<LineFilterPrior>(height, width);
  if (sel.crack.rfind("file:", 0) == 0) {
    auto prior = load_fixed_map_prior(sel.crack.substr(5));
    if (prior->height() != height || prior->width() != width)
      throw shape_error("file prior map is " + std::to_string(prior->height()) +
                        "x" + std::to_string(prior->width()) +
                        " but the processed tile is " + std::to_string(height) +
                        "x" + std::to_string(width));
    return prior;
  }
  throw io_error("unknown crack prior '" + sel.crack + "'");
}

DetectResult detect(const ColorField &image, const DetectConfig &config) {
  const std::vector<Tile> tiles = tile_image(image, config.tiling);

  std::vector<std::pair<ScalarField, std::pair<int, int>>> soft_tiles;
  std::vector<std::pair<ScalarField, std::pair<int, int>>> binary_tiles;
  DetectResult result;

  for (const Tile &tile : tiles) {
    const auto gen = make_generator(config.priors, tile.patch.height, tile.patch.width);
    const auto prior = make_crack_prior(config.priors, tile.patch.height, tile.patch.width);
    auto [state, trace] = solve(tile.patch, *gen, *prior, config.params, config.adam);
    result.traces.push_back(std::move(trace));

    const ScalarField v = sigmoid(state.s);
    ScalarField soft(v.height, v.width);
    for (int i = 0; i < v.size(); ++i)
      soft.data[i] = 1.0 - v.data[i];

    if (!config.global_threshold)
      binary_tiles.emplace_back(binarize(soft, otsu_threshold(soft)),
                                std::make_pair(tile.offset_y, tile.offset_x));
    soft_tiles.emplace_back(std::move(soft),
                            std::make_pair(tile.offset_y, tile.offset_x));
  }

  result.soft = merge_soft(soft_tiles, image.height, image.width);
  if (config.global_threshold)
    result.binary = binarize(result.soft, otsu_threshold(result.soft));
  else
    result.binary = merge_binary(binary_tiles, image.height, image.width);
  return result;
}

ColorField overlay_detection(const ColorField &image, const ScalarField &binary) {
  require_same_shape(image, binary, "overlay_detection");
  ColorField out = image;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      if (binary.at(y, x) != 0.0) {
        out.at(y, x, 0) = 1.0;
        out.at(y, x, 1) = 0.0;
        out.at(y, x, 2) = 0.0;
      }
  return out;
}

} // namespace craq
