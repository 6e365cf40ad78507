#ifndef CRAQ_GRADCHECK_HPP
#define CRAQ_GRADCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "craq/energy.hpp"

namespace craq {

/// Relative error of one analytic gradient block against central finite
/// differences of the full objective: ||fd - analytic||_2 / max(||fd||_2, tiny).
struct GradCheckCombo {
  std::string generator;
  std::string crack_prior;
  double err_z = 0.0;
  double err_s = 0.0;
  double err_uprime = 0.0;

  double max_err() const;
};

struct GradCheckReport {
  std::vector<GradCheckCombo> combos;
  double max_err = 0.0;
  bool passed(double threshold = 1e-3) const { return max_err <= threshold; }
};

struct GradCheckOptions {
  uint64_t seed = 1;
  int size = 8;
  double fd_step = 1e-4;
  /// Test hook: added to the first entry of the analytic s-gradient so the
  /// oracle's sensitivity itself can be verified.
  double corrupt = 0.0;
};

/// Finite-difference comparison on a random instance for every shipped
/// (generator, crack prior) combination.
GradCheckReport gradient_check(const GradCheckOptions &options);

/// Same comparison on a single externally built instance.
GradCheckCombo gradient_check_instance(const ColorField &u, const LatentCode &z,
                                       const ScalarField &s, const ColorField &uprime,
                                       const GeneratorPrior &gen,
                                       const CrackPrior &prior,
                                       const EnergyParams &params,
                                       double fd_step, double corrupt = 0.0);

} // namespace craq

#endif
