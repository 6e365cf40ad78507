#ifndef CRAQ_GRIDSEARCH_HPP
#define CRAQ_GRIDSEARCH_HPP

#include <string>
#include <vector>

#include "craq/detect.hpp"
#include "craq/energy.hpp"

namespace craq {

struct GridSpec {
  std::vector<double> lambda_preg;
  std::vector<double> lambda_creg;
  std::vector<double> lambda_cp;
  std::vector<double> epsilon;
  std::string manifest_path; // evaluation set: JSONL with out/mask pairs
  DetectConfig solver;       // tiling, adam and prior selection shared by all runs
  std::string cache_dir;     // per-(params, image) F1 cache; empty disables
};

struct GridRow {
  EnergyParams params;
  double mean_f1 = 0.0;
  int n_images = 0;
  int n_failed = 0;
};

/// Exhaustive search over the candidate lists (duplicates removed), ranked by
/// mean F1 descending; ties break toward smaller (cp, creg, preg, epsilon).
/// Failed solves are recorded and the combination scored over the remaining
/// images.
std::vector<GridRow> grid_search(const GridSpec &spec);

/// Results CSV: lambda_preg,lambda_creg,lambda_cp,epsilon,mean_f1,n_images,n_failed.
void write_grid_csv(const std::vector<GridRow> &rows, const std::string &path);

} // namespace craq

#endif
