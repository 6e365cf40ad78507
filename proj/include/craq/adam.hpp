#ifndef CRAQ_ADAM_HPP
#define CRAQ_ADAM_HPP

#include <string>
#include <vector>

#include "craq/energy.hpp"
#include "craq/field.hpp"
#include "craq/priors.hpp"

namespace craq {

/// Adam configuration with per-block step sizes for (z, s, U').
///
/// paper_verbatim_mode selects between the two published readings of the
/// update:
///   false (default): standard Adam -- second moment accumulated with
///     (1 - beta2), step divides by (sqrt(v_hat) + margin).
///   true: the printed variant -- second moment accumulated with (1 - beta1)
///     and step dividing by (v_hat + margin), no square root.
struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double zero_division_margin = 1e-8;
  double step_z = 0.005;
  double step_s = 0.1;
  double step_uprime = 0.01;
  int iterations = 1000;
  bool paper_verbatim_mode = false;
  bool early_stop = true;
  double early_stop_rel_change = 1e-6;
  int early_stop_window = 20;
};

/// Optimization variables plus the Adam moment buffers over the concatenated
/// variable (z, s, U'). Buffers are zero-initialized; k counts completed steps.
struct SolverState {
  LatentCode z;
  ScalarField s;
  ColorField uprime;
  std::vector<double> m; // first moment
  std::vector<double> w; // second moment
  long k = 0;

  int z_dim() const { return z.dim(); }
  int s_dim() const { return s.size(); }
  int uprime_dim() const { return uprime.samples(); }
};

struct IterationRecord {
  EnergyBreakdown energy;
  double seconds = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool early_stopped = false;
};

/// Fresh state for the given problem: U' = U, z from the generator's rule,
/// s = logit(clamp(P(U), 0.05, 0.95)) so the crack prior seeds the indicator.
SolverState init_state(const ColorField &u, const GeneratorPrior &gen,
                       const CrackPrior &prior);

/// One Adam update over the concatenated blocks. Throws numeric_error naming
/// the offending block on non-finite gradients.
void adam_step(SolverState &state, const EnergyGradients &grad,
               const AdamConfig &config);

/// Run `iterations` Adam steps on the full objective (optionally stopping
/// early when the relative total-energy change stays below the configured
/// threshold across the early-stop window). Returns the final state and the
/// per-iteration energy trace.
std::pair<SolverState, IterationTrace>
solve(const ColorField &u, const GeneratorPrior &gen, const CrackPrior &prior,
      const EnergyParams &params, const AdamConfig &config);

/// Trace CSV: columns iter,data_fidelity,preg,creg,cp,total.
void write_trace_csv(const IterationTrace &trace, const std::string &path);

} // namespace craq

#endif
