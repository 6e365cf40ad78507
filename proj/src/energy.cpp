#include "craq/energy.hpp"

#include <cmath>

#include "craq/ops.hpp"
#include "craq/parallel.hpp"

namespace craq {

ScalarField sigmoid(const ScalarField &s) {
  ScalarField v(s.height, s.width);
#pragma omp parallel for schedule(static) if (s.size() >= kParallelCutoff)
  for (int i = 0; i < s.size(); ++i) {
    const double a = s.data[i];
    if (a >= 0.0) {
      v.data[i] = 1.0 / (1.0 + std::exp(-a));
    } else {
      const double e = std::exp(a);
      v.data[i] = e / (1.0 + e);
    }
  }
  return v;
}

double data_fidelity(const ColorField &u, const ColorField &b,
                     const ScalarField &v) {
  require_same_shape(u, b, "data_fidelity");
  require_same_shape(u, v, "data_fidelity");
  const int w = u.width;
  return row_sum(u.height, u.samples(), [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x) {
      const double vv = v.at(y, x) * v.at(y, x);
      for (int c = 0; c < 3; ++c) {
        const double r = u.at(y, x, c) - b.at(y, x, c);
        acc += vv * r * r;
      }
    }
    return acc;
  });
}

double preg_energy(const ColorField &b, const ScalarField &v) {
  require_same_shape(b, v, "preg_energy");
  const int h = b.height, w = b.width;
  // Forward differences inlined per channel; last row/column contribute 0.
  return row_sum(h, static_cast<long>(h) * w * 3, [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x) {
      double grad2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double dx = (x < w - 1) ? b.at(y, x + 1, c) - b.at(y, x, c) : 0.0;
        const double dy = (y < h - 1) ? b.at(y + 1, x, c) - b.at(y, x, c) : 0.0;
        grad2 += dx * dx + dy * dy;
      }
      acc += v.at(y, x) * v.at(y, x) * grad2;
    }
    return acc;
  });
}

double creg_energy(const ScalarField &v, double epsilon) {
  if (!(epsilon > 0.0))
    throw numeric_error("creg_energy: epsilon must be > 0");
  const int h = v.height, w = v.width;
  const double quarter_eps = 1.0 / (4.0 * epsilon);
  return row_sum(h, v.size(), [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x) {
      const double dx = (x < w - 1) ? v.at(y, x + 1) - v.at(y, x) : 0.0;
      const double dy = (y < h - 1) ? v.at(y + 1, x) - v.at(y, x) : 0.0;
      const double vm1 = v.at(y, x) - 1.0;
      acc += epsilon * (dx * dx + dy * dy) + vm1 * vm1 * quarter_eps;
    }
    return acc;
  });
}

double cp_energy(const ScalarField &v, const ScalarField &p_map) {
  require_same_shape(v, p_map, "cp_energy");
  const int w = v.width;
  return row_sum(v.height, v.size(), [&](int y) {
    double acc = 0.0;
    for (int x = 0; x < w; ++x) {
      const double d = v.at(y, x) - p_map.at(y, x);
      acc += d * d;
    }
    return acc;
  });
}

EnergyBreakdown total_energy(const ColorField &u, const LatentCode &z,
                             const ScalarField &s, const ColorField &uprime,
                             const GeneratorPrior &gen, const CrackPrior &prior,
                             const EnergyParams &params) {
  const ScalarField v = sigmoid(s);
  const ColorField b = gen.generate(z);
  const ScalarField p = prior.predict(uprime);
  EnergyBreakdown e;
  e.data_fidelity = data_fidelity(u, b, v);
  e.preg = preg_energy(b, v);
  e.creg = creg_energy(v, params.epsilon);
  e.cp = cp_energy(v, p);
  e.total = e.data_fidelity + params.lambda_preg * e.preg +
            params.lambda_creg * e.creg + params.lambda_cp * e.cp;
  return e;
}

namespace {

// Shared forward + backward pass. The chain:
//   dL/dv  collects all four terms, then grad_s = dL/dv . v(1-v);
//   dL/dB  combines the fidelity residual and the painting-regularity
//          divergence, then grad_z = G.vjp(z, dL/dB);
//   dL/dp  = -2 lambda_cp (v - p), then grad_Uprime = P.vjp(U', dL/dp).
EnergyEvaluation evaluate_impl(const ColorField &u, const LatentCode &z,
                               const ScalarField &s, const ColorField &uprime,
                               const GeneratorPrior &gen,
                               const CrackPrior &prior,
                               const EnergyParams &params) {
  require_same_shape(u, s, "evaluate");
  require_same_shape(u, uprime, "evaluate");

  const ScalarField v = sigmoid(s);
  const ColorField b = gen.generate(z);
  const ScalarField p = prior.predict(uprime);
  require_same_shape(u, b, "evaluate: generator output");
  require_same_shape(u, p, "evaluate: prior output");

  const int h = u.height, w = u.width;
  const double eps = params.epsilon;

  EnergyBreakdown e;
  e.data_fidelity = data_fidelity(u, b, v);
  e.preg = preg_energy(b, v);
  e.creg = creg_energy(v, eps);
  e.cp = cp_energy(v, p);
  e.total = e.data_fidelity + params.lambda_preg * e.preg +
            params.lambda_creg * e.creg + params.lambda_cp * e.cp;

  // dL/dv, pointwise parts: fidelity, painting regularity, the (v-1)^2 well
  // and the prior consistency.
  ScalarField dv(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double res2 = 0.0, grad2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double r = u.at(y, x, c) - b.at(y, x, c);
        res2 += r * r;
        const double dxB = (x < w - 1) ? b.at(y, x + 1, c) - b.at(y, x, c) : 0.0;
        const double dyB = (y < h - 1) ? b.at(y + 1, x, c) - b.at(y, x, c) : 0.0;
        grad2 += dxB * dxB + dyB * dyB;
      }
      const double vx = v.at(y, x);
      dv.at(y, x) = 2.0 * vx * res2 + params.lambda_preg * 2.0 * vx * grad2 +
                    params.lambda_creg * (vx - 1.0) / (2.0 * eps) +
                    params.lambda_cp * 2.0 * (vx - p.at(y, x));
    }
  }
  // dL/dv, smoothness part: 2 eps lambda_creg D^T D v.
  {
    const GradientPair gv = grad_forward(v);
    const ScalarField div = grad_adjoint(gv);
    const double coeff = 2.0 * eps * params.lambda_creg;
#pragma omp parallel for schedule(static) if (dv.size() >= kParallelCutoff)
    for (int i = 0; i < dv.size(); ++i)
      dv.data[i] += coeff * div.data[i];
  }

  EnergyGradients g;
  g.grad_s = ScalarField(h, w);
#pragma omp parallel for schedule(static) if (dv.size() >= kParallelCutoff)
  for (int i = 0; i < dv.size(); ++i) {
    const double vx = v.data[i];
    g.grad_s.data[i] = dv.data[i] * vx * (1.0 - vx);
  }

  // dL/dB = -2 v^2 (U - B) + 2 lambda_preg D^T(v^2 . D B_c) per channel.
  ColorField db(h, w);
  for (int c = 0; c < 3; ++c) {
    ScalarField chan_dx(h, w), chan_dy(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double vv = v.at(y, x) * v.at(y, x);
        chan_dx.at(y, x) =
            (x < w - 1) ? vv * (b.at(y, x + 1, c) - b.at(y, x, c)) : 0.0;
        chan_dy.at(y, x) =
            (y < h - 1) ? vv * (b.at(y + 1, x, c) - b.at(y, x, c)) : 0.0;
      }
    }
    const ScalarField adj = grad_adjoint(GradientPair{chan_dx, chan_dy});
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double vv = v.at(y, x) * v.at(y, x);
        db.at(y, x, c) =
            -2.0 * vv * (u.at(y, x, c) - b.at(y, x, c)) +
            params.lambda_preg * 2.0 * adj.at(y, x);
      }
    }
  }
  g.grad_z = gen.vjp(z, db);

  // dL/dp and the pullback to U'.
  ScalarField dp(h, w);
#pragma omp parallel for schedule(static) if (dp.size() >= kParallelCutoff)
  for (int i = 0; i < dp.size(); ++i)
    dp.data[i] = -2.0 * params.lambda_cp * (v.data[i] - p.data[i]);
  g.grad_uprime = prior.vjp(uprime, dp);

  return EnergyEvaluation{e, std::move(g)};
}

} // namespace

EnergyGradients gradients(const ColorField &u, const LatentCode &z,
                          const ScalarField &s, const ColorField &uprime,
                          const GeneratorPrior &gen, const CrackPrior &prior,
                          const EnergyParams &params) {
  return evaluate_impl(u, z, s, uprime, gen, prior, params).grads;
}

EnergyEvaluation evaluate(const ColorField &u, const LatentCode &z,
                          const ScalarField &s, const ColorField &uprime,
                          const GeneratorPrior &gen, const CrackPrior &prior,
                          const EnergyParams &params) {
  return evaluate_impl(u, z, s, uprime, gen, prior, params);
}

} // namespace craq
