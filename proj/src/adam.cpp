#include "craq/adam.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "craq/parallel.hpp"

namespace craq {

SolverState init_state(const ColorField &u, const GeneratorPrior &gen,
                       const CrackPrior &prior) {
  if (gen.height() != u.height || gen.width() != u.width)
    throw shape_error("solve: generator shape does not match the image");
  if (prior.height() != u.height || prior.width() != u.width)
    throw shape_error("solve: crack prior shape does not match the image");

  SolverState st;
  st.z = gen.initial_latent(u);
  st.uprime = u;

  const ScalarField seed = prior.predict(u);
  st.s = ScalarField(u.height, u.width);
  for (int i = 0; i < st.s.size(); ++i) {
    const double v0 = std::clamp(seed.data[i], 0.05, 0.95);
    st.s.data[i] = std::log(v0 / (1.0 - v0));
  }

  const size_t total = static_cast<size_t>(st.z_dim()) + st.s_dim() + st.uprime_dim();
  st.m.assign(total, 0.0);
  st.w.assign(total, 0.0);
  st.k = 0;
  return st;
}

namespace {

void check_finite(const double *g, int n, const char *block) {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(g[i]))
      throw numeric_error(std::string("adam_step: non-finite gradient in block '") +
                          block + "'");
}

// One block update; m/w are slices of the concatenated buffers.
void update_block(double *x, const double *g, double *m, double *w, int n,
                  double gamma, double bc1, double bc2, const AdamConfig &cfg) {
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
  for (int i = 0; i < n; ++i) {
    const double gi = g[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
    if (cfg.paper_verbatim_mode)
      w[i] = cfg.beta2 * w[i] + (1.0 - cfg.beta1) * gi * gi;
    else
      w[i] = cfg.beta2 * w[i] + (1.0 - cfg.beta2) * gi * gi;
    const double m_hat = m[i] / bc1;
    const double w_hat = w[i] / bc2;
    const double denom = cfg.paper_verbatim_mode
                             ? w_hat + cfg.zero_division_margin
                             : std::sqrt(w_hat) + cfg.zero_division_margin;
    x[i] -= gamma * m_hat / denom;
  }
}

} // namespace

void adam_step(SolverState &state, const EnergyGradients &grad,
               const AdamConfig &config) {
  const int nz = state.z_dim();
  const int ns = state.s_dim();
  const int nu = state.uprime_dim();
  if (grad.grad_z.dim() != nz || grad.grad_s.size() != ns ||
      grad.grad_uprime.samples() != nu)
    throw shape_error("adam_step: gradient blocks do not match the state");

  check_finite(grad.grad_z.data.data(), nz, "z");
  check_finite(grad.grad_s.data.data(), ns, "s");
  check_finite(grad.grad_uprime.data.data(), nu, "uprime");

  state.k += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.k));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.k));

  update_block(state.z.data.data(), grad.grad_z.data.data(), state.m.data(),
               state.w.data(), nz, config.step_z, bc1, bc2, config);
  update_block(state.s.data.data(), grad.grad_s.data.data(), state.m.data() + nz,
               state.w.data() + nz, ns, config.step_s, bc1, bc2, config);
  update_block(state.uprime.data.data(), grad.grad_uprime.data.data(),
               state.m.data() + nz + ns, state.w.data() + nz + ns, nu,
               config.step_uprime, bc1, bc2, config);
}

std::pair<SolverState, IterationTrace>
solve(const ColorField &u, const GeneratorPrior &gen, const CrackPrior &prior,
      const EnergyParams &params, const AdamConfig &config) {
  SolverState st = init_state(u, gen, prior);
  IterationTrace trace;
  trace.records.reserve(std::max(0, config.iterations));

  for (int it = 0; it < config.iterations; ++it) {
    const auto t0 = std::chrono::steady_clock::now();
    EnergyEvaluation ev = evaluate(u, st.z, st.s, st.uprime, gen, prior, params);
    if (!std::isfinite(ev.breakdown.total))
      throw numeric_error("solve: non-finite energy at iteration " +
                          std::to_string(it));
    adam_step(st, ev.grads, config);
    const auto t1 = std::chrono::steady_clock::now();
    trace.records.push_back(
        {ev.breakdown, std::chrono::duration<double>(t1 - t0).count()});

    if (config.early_stop &&
        static_cast<int>(trace.records.size()) > config.early_stop_window) {
      const double now = ev.breakdown.total;
      const double then =
          trace.records[trace.records.size() - 1 - config.early_stop_window]
              .energy.total;
      const double rel = std::abs(now - then) / std::max(std::abs(then), 1e-300);
      if (rel < config.early_stop_rel_change) {
        trace.early_stopped = true;
        break;
      }
    }
  }
  return {std::move(st), std::move(trace)};
}

void write_trace_csv(const IterationTrace &trace, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw io_error("cannot write trace: " + path);
  out << "iter,data_fidelity,preg,creg,cp,total\n";
  char line[256];
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const EnergyBreakdown &e = trace.records[i].energy;
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                  e.data_fidelity, e.preg, e.creg, e.cp, e.total);
    out << line;
  }
  if (!out)
    throw io_error("short write: " + path);
}

} // namespace craq
