#include "craq/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "craq/rng.hpp"

namespace craq {

double GradCheckCombo::max_err() const {
  return std::max(err_z, std::max(err_s, err_uprime));
}

namespace {

double block_rel_err(const std::vector<double> &fd,
                     const std::vector<double> &analytic) {
  double diff2 = 0.0, fd2 = 0.0;
  for (size_t i = 0; i < fd.size(); ++i) {
    const double d = fd[i] - analytic[i];
    diff2 += d * d;
    fd2 += fd[i] * fd[i];
  }
  if (fd2 == 0.0)
    return std::sqrt(diff2); // absolute when the true gradient vanishes
  return std::sqrt(diff2 / fd2);
}

} // namespace

GradCheckCombo gradient_check_instance(const ColorField &u, const LatentCode &z,
                                       const ScalarField &s, const ColorField &uprime,
                                       const GeneratorPrior &gen,
                                       const CrackPrior &prior,
                                       const EnergyParams &params,
                                       double fd_step, double corrupt) {
  EnergyGradients analytic = gradients(u, z, s, uprime, gen, prior, params);
  if (corrupt != 0.0)
    analytic.grad_s.data[0] += corrupt;

  const auto energy_at = [&](const LatentCode &zz, const ScalarField &ss,
                             const ColorField &uu) {
    return total_energy(u, zz, ss, uu, gen, prior, params).total;
  };

  const auto fd_block = [&](std::vector<double> coords, auto rebuild) {
    std::vector<double> fd(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) {
      const double keep = coords[i];
      coords[i] = keep + fd_step;
      const double plus = rebuild(coords);
      coords[i] = keep - fd_step;
      const double minus = rebuild(coords);
      coords[i] = keep;
      fd[i] = (plus - minus) / (2.0 * fd_step);
    }
    return fd;
  };

  GradCheckCombo combo;
  combo.generator = gen.name();
  combo.crack_prior = prior.name();

  {
    const std::vector<double> fd = fd_block(z.data, [&](const std::vector<double> &c) {
      LatentCode zz = z;
      zz.data = c;
      return energy_at(zz, s, uprime);
    });
    combo.err_z = block_rel_err(fd, analytic.grad_z.data);
  }
  {
    const std::vector<double> fd = fd_block(s.data, [&](const std::vector<double> &c) {
      ScalarField ss = s;
      ss.data = c;
      return energy_at(z, ss, uprime);
    });
    combo.err_s = block_rel_err(fd, analytic.grad_s.data);
  }
  {
    const std::vector<double> fd = fd_block(uprime.data, [&](const std::vector<double> &c) {
      ColorField uu = uprime;
      uu.data = c;
      return energy_at(z, s, uu);
    });
    combo.err_uprime = block_rel_err(fd, analytic.grad_uprime.data);
  }
  return combo;
}

GradCheckReport gradient_check(const GradCheckOptions &options) {
  const int n = options.size;
  Rng rng(options.seed);

  ColorField u(n, n);
  for (double &x : u.data)
    x = rng.u01();
  ScalarField s(n, n);
  for (double &x : s.data)
    x = rng.uniform(-2.0, 2.0);
  ColorField uprime(n, n);
  for (double &x : uprime.data)
    x = rng.u01();
  ScalarField fixed_map(n, n);
  for (double &x : fixed_map.data)
    x = rng.u01();

  std::vector<std::unique_ptr<GeneratorPrior>> gens;
  gens.push_back(std::make_unique<IdentityGenerator>(n, n));
  if (n % 2 == 0)
    gens.push_back(std::make_unique<BilinearGenerator>(n, n, 2));

  GradCheckReport report;
  const EnergyParams params; // tuned defaults
  for (const auto &gen : gens) {
    LatentCode z = gen->initial_latent(u);
    // keep the identity generator away from its clamp kinks
    for (double &x : z.data)
      x = std::clamp(x, 0.05, 0.95);

    std::vector<std::unique_ptr<CrackPrior>> priors;
    priors.push_back(std::make_unique<LineFilterPrior>(n, n));
    priors.push_back(std::make_unique<FixedMapPrior>(fixed_map));
    for (const auto &prior : priors) {
      report.combos.push_back(gradient_check_instance(
          u, z, s, uprime, *gen, *prior, params, options.fd_step, options.corrupt));
      report.max_err = std::max(report.max_err, report.combos.back().max_err());
    }
  }
  return report;
}

} // namespace craq
