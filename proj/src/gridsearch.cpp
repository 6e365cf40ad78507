#include "craq/gridsearch.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <tuple>

#include "craq/image_io.hpp"
#include "craq/ops.hpp"
#include "craq/synthetic.hpp"

namespace fs = std::filesystem;

namespace craq {

namespace {

uint64_t fnv1a(const void *bytes, size_t n, uint64_t h = 1469598103934665603ull) {
  const auto *p = static_cast<const unsigned char *>(bytes);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t cache_key(const EnergyParams &p, const ColorField &image) {
  uint64_t h = fnv1a(&p.lambda_preg, sizeof(double));
  h = fnv1a(&p.lambda_creg, sizeof(double), h);
  h = fnv1a(&p.lambda_cp, sizeof(double), h);
  h = fnv1a(&p.epsilon, sizeof(double), h);
  h = fnv1a(image.data.data(), image.data.size() * sizeof(double), h);
  return h;
}

bool cache_load(const std::string &dir, uint64_t key, double &f1) {
  if (dir.empty())
    return false;
  std::ifstream in(fs::path(dir) / (std::to_string(key) + ".f1"));
  return static_cast<bool>(in >> f1);
}

void cache_store(const std::string &dir, uint64_t key, double f1) {
  if (dir.empty())
    return;
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / (std::to_string(key) + ".f1"));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", f1);
  out << buf;
}

std::vector<double> dedup_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

} // namespace

std::vector<GridRow> grid_search(const GridSpec &spec) {
  if (spec.lambda_preg.empty() || spec.lambda_creg.empty() ||
      spec.lambda_cp.empty() || spec.epsilon.empty())
    throw io_error("grid_search: every candidate list must be non-empty");

  const DatasetManifest manifest = read_manifest(spec.manifest_path);
  struct Case {
    ColorField image;
    ScalarField truth;
  };
  std::vector<Case> cases;
  for (const auto &e : manifest.entries) {
    if (e.skipped)
      continue;
    cases.push_back({load_image(e.out), binarize(load_image_gray(e.mask), 0.5)});
  }
  if (cases.empty())
    throw io_error("grid_search: evaluation set is empty");

  const auto pregs = dedup_sorted(spec.lambda_preg);
  const auto cregs = dedup_sorted(spec.lambda_creg);
  const auto cps = dedup_sorted(spec.lambda_cp);
  const auto epss = dedup_sorted(spec.epsilon);

  std::vector<GridRow> rows;
  for (double lp : pregs)
    for (double lc : cregs)
      for (double lcp : cps)
        for (double eps : epss) {
          GridRow row;
          row.params = EnergyParams{lp, lc, lcp, eps};
          double sum_f1 = 0.0;
          int scored = 0;
          for (const Case &cs : cases) {
            const uint64_t key = cache_key(row.params, cs.image);
            double f1 = 0.0;
            if (!cache_load(spec.cache_dir, key, f1)) {
              try {
                DetectConfig cfg = spec.solver;
                cfg.params = row.params;
                const DetectResult res = detect(cs.image, cfg);
                f1 = f1_score(res.binary, cs.truth);
              } catch (const std::exception &ex) {
                std::cerr << "grid_search: solve failed (" << ex.what() << ")\n";
                ++row.n_failed;
                continue;
              }
              cache_store(spec.cache_dir, key, f1);
            }
            sum_f1 += f1;
            ++scored;
          }
          row.n_images = scored;
          row.mean_f1 = scored > 0 ? sum_f1 / scored : 0.0;
          rows.push_back(row);
        }

  std::stable_sort(rows.begin(), rows.end(), [](const GridRow &a, const GridRow &b) {
    if (a.mean_f1 != b.mean_f1)
      return a.mean_f1 > b.mean_f1;
    return std::make_tuple(a.params.lambda_cp, a.params.lambda_creg,
                           a.params.lambda_preg, a.params.epsilon) <
           std::make_tuple(b.params.lambda_cp, b.params.lambda_creg,
                           b.params.lambda_preg, b.params.epsilon);
  });
  return rows;
}

void write_grid_csv(const std::vector<GridRow> &rows, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw io_error("cannot write results: " + path);
  out << "lambda_preg,lambda_creg,lambda_cp,epsilon,mean_f1,n_images,n_failed\n";
  char line[256];
  for (const GridRow &r : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                  r.params.lambda_preg, r.params.lambda_creg, r.params.lambda_cp,
                  r.params.epsilon, r.mean_f1, r.n_images, r.n_failed);
    out << line;
  }
}

} // namespace craq
