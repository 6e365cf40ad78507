#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "craq/energy.hpp"
#include "craq/gradcheck.hpp"
#include "craq/priors.hpp"
#include "craq/rng.hpp"
#include "test_oracles.hpp"

using namespace craq;

TEST_CASE("sigmoid: symmetry, exact values, stability") {
  ScalarField s(1, 3);
  s.data = {0.0, std::log(3.0), -40.0};
  const ScalarField v = sigmoid(s);
  CHECK(v.data[0] == 0.5);
  CHECK(v.data[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(v.data[2] > 0.0); // no underflow to exactly zero
  CHECK(v.data[2] * (1.0 - v.data[2]) > 0.0);

  ScalarField extreme(1, 2);
  extreme.data = {700.0, -700.0};
  const ScalarField ve = sigmoid(extreme);
  CHECK(std::isfinite(ve.data[0]));
  CHECK(ve.data[1] > 0.0);
}

TEST_CASE("data_fidelity: masked residual") {
  Rng rng(3);
  ColorField u(4, 4), b(4, 4);
  for (double &x : u.data)
    x = rng.u01();
  ScalarField v(4, 4);
  for (double &x : v.data)
    x = rng.u01();

  CHECK(data_fidelity(u, u, v) == 0.0);
  for (double &x : b.data)
    x = rng.u01();
  CHECK(data_fidelity(u, b, ScalarField(4, 4, 0.0)) == 0.0);

  ColorField u1(1, 1, 0.0), b1(1, 1, 0.0);
  u1.at(0, 0, 1) = 0.5; // one channel differs by 0.5
  CHECK(data_fidelity(u1, b1, ScalarField(1, 1, 1.0)) ==
        doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(data_fidelity(u, ColorField(3, 3, 0.0), v), shape_error);
}

TEST_CASE("preg_energy: edge cost excused by v") {
  CHECK(preg_energy(ColorField(5, 5, 0.3), ScalarField(5, 5, 1.0)) == 0.0);

  Rng rng(5);
  ColorField b(5, 5);
  for (double &x : b.data)
    x = rng.u01();
  CHECK(preg_energy(b, ScalarField(5, 5, 0.0)) == 0.0);

  // 1x2 single-channel step of height 1 under unit spacing
  ColorField step(1, 2, 0.0);
  step.at(0, 1, 0) = 1.0;
  CHECK(preg_energy(step, ScalarField(1, 2, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("creg_energy: well at v = 1 and closed forms") {
  const int n = 7;
  CHECK(creg_energy(ScalarField(n, n, 1.0), 0.005) == 0.0);
  CHECK(creg_energy(ScalarField(n, n, 0.0), 0.005) ==
        doctest::Approx(50.0 * n * n).epsilon(1e-13));
  CHECK(creg_energy(ScalarField(n, n, 0.5), 0.005) ==
        doctest::Approx(12.5 * n * n).epsilon(1e-13));
  CHECK_THROWS_AS(creg_energy(ScalarField(2, 2, 0.5), 0.0), numeric_error);
}

TEST_CASE("cp_energy: pointwise consistency") {
  const int n = 6;
  Rng rng(7);
  ScalarField v(n, n);
  for (double &x : v.data)
    x = rng.u01();
  CHECK(cp_energy(v, v) == 0.0);
  CHECK(cp_energy(ScalarField(n, n, 1.0), ScalarField(n, n, 0.0)) ==
        doctest::Approx(static_cast<double>(n * n)).epsilon(1e-15));
  CHECK(cp_energy(ScalarField(n, n, 0.3), ScalarField(n, n, 0.7)) ==
        doctest::Approx(0.16 * n * n).epsilon(1e-13));
}

TEST_CASE("total_energy: vanishing limit and weight linearity") {
  const int n = 6;
  const ColorField u(n, n, 0.4); // constant image
  IdentityGenerator gen(n, n);
  const LatentCode z = gen.initial_latent(u);
  const FixedMapPrior prior(ScalarField(n, n, 1.0));
  const ScalarField s(n, n, 20.0); // v -> 1

  const EnergyParams params;
  const EnergyBreakdown e = total_energy(u, z, s, u, gen, prior, params);
  CHECK(e.total < 1e-6);

  // zero weights leave only the data term
  Rng rng(11);
  ScalarField s2(n, n);
  for (double &x : s2.data)
    x = rng.uniform(-2.0, 2.0);
  EnergyParams zero;
  zero.lambda_preg = zero.lambda_creg = zero.lambda_cp = 0.0;
  const EnergyBreakdown ez = total_energy(u, z, s2, u, gen, prior, zero);
  CHECK(ez.total == ez.data_fidelity);
}

TEST_CASE("total_energy equals the independently summed terms") {
  const int n = 8;
  Rng rng(13);
  ColorField u(n, n), uprime(n, n);
  ScalarField s(n, n), map(n, n);
  for (double &x : u.data)
    x = rng.u01();
  for (double &x : uprime.data)
    x = rng.u01();
  for (double &x : s.data)
    x = rng.uniform(-2.0, 2.0);
  for (double &x : map.data)
    x = rng.u01();

  BilinearGenerator gen(n, n, 2);
  LatentCode z;
  z.height = z.width = n / 2;
  z.channels = 3;
  z.data.resize(gen.latent_dim());
  for (double &x : z.data)
    x = rng.u01();
  const LineFilterPrior prior(n, n);

  const EnergyParams params{0.8, 0.25, 0.6, 0.01};
  const EnergyBreakdown e = total_energy(u, z, s, uprime, gen, prior, params);

  const ScalarField v = sigmoid(s);
  const ColorField b = gen.generate(z);
  const ScalarField p = prior.predict(uprime);
  const double expect = data_fidelity(u, b, v) + params.lambda_preg * preg_energy(b, v) +
                        params.lambda_creg * creg_energy(v, params.epsilon) +
                        params.lambda_cp * cp_energy(v, p);
  CHECK(e.total == doctest::Approx(expect).epsilon(1e-12));
  CHECK(e.data_fidelity >= 0.0);
  CHECK(e.preg >= 0.0);
  CHECK(e.creg >= 0.0);
  CHECK(e.cp >= 0.0);

  // linearity in each lambda holding the fields fixed
  EnergyParams bumped = params;
  bumped.lambda_cp = params.lambda_cp + 0.5;
  const EnergyBreakdown e2 = total_energy(u, z, s, uprime, gen, prior, bumped);
  CHECK(e2.total - e.total == doctest::Approx(0.5 * e.cp).epsilon(1e-12));
}

TEST_CASE("gradients vanish at the stationary configuration") {
  const int n = 5;
  const ColorField u(n, n, 0.35);
  IdentityGenerator gen(n, n);
  const LatentCode z = gen.initial_latent(u);
  const FixedMapPrior prior(ScalarField(n, n, 1.0));
  const ScalarField s(n, n, 40.0); // v = 1 to machine precision

  const EnergyGradients g = gradients(u, z, s, u, gen, prior, EnergyParams{});
  for (double x : g.grad_s.data)
    CHECK(std::abs(x) <= 1e-12);
  for (double x : g.grad_z.data)
    CHECK(std::abs(x) <= 1e-12);
  for (double x : g.grad_uprime.data)
    CHECK(std::abs(x) <= 1e-12);
}

TEST_CASE("gradients match finite differences across prior combinations") {
  const GradCheckOptions options{.seed = 77, .size = 8, .fd_step = 1e-4};
  const GradCheckReport report = gradient_check(options);
  CHECK(report.combos.size() == 4);
  CHECK(report.max_err <= 1e-4);
}

TEST_CASE("gradient check is sensitive to corruption") {
  GradCheckOptions options{.seed = 77, .size = 8, .fd_step = 1e-4};
  options.corrupt = 0.05;
  const GradCheckReport report = gradient_check(options);
  CHECK(report.max_err > 1e-3);
}

TEST_CASE("independent finite differences of grad_s") {
  // test-owned FD, not the library's gradcheck path
  const int n = 6;
  Rng rng(17);
  ColorField u(n, n), uprime(n, n);
  ScalarField s(n, n);
  for (double &x : u.data)
    x = rng.u01();
  for (double &x : uprime.data)
    x = rng.u01();
  for (double &x : s.data)
    x = rng.uniform(-2.0, 2.0);
  BilinearGenerator gen(n, n, 2);
  LatentCode z;
  z.height = z.width = n / 2;
  z.channels = 3;
  z.data.resize(gen.latent_dim());
  for (double &x : z.data)
    x = rng.u01();
  const LineFilterPrior prior(n, n);
  const EnergyParams params;

  const EnergyGradients g = gradients(u, z, s, uprime, gen, prior, params);
  const double h = 1e-4;
  double diff2 = 0.0, fd2 = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    ScalarField sp = s, sm = s;
    sp.data[i] += h;
    sm.data[i] -= h;
    const double fd = (total_energy(u, z, sp, uprime, gen, prior, params).total -
                       total_energy(u, z, sm, uprime, gen, prior, params).total) /
                      (2.0 * h);
    diff2 += (fd - g.grad_s.data[i]) * (fd - g.grad_s.data[i]);
    fd2 += fd * fd;
  }
  CHECK(std::sqrt(diff2 / fd2) <= 1e-4);
}

TEST_CASE("pointwise terms are permutation equivariant") {
  const int n = 6;
  Rng rng(19);
  ColorField u(n, n), b(n, n);
  ScalarField v(n, n), p(n, n);
  for (double &x : u.data)
    x = rng.u01();
  for (double &x : b.data)
    x = rng.u01();
  for (double &x : v.data)
    x = rng.u01();
  for (double &x : p.data)
    x = rng.u01();

  std::vector<int> perm(n * n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n * n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.randint(0, i)]);

  ColorField up(n, n), bp(n, n);
  ScalarField vp(n, n), pp(n, n);
  for (int i = 0; i < n * n; ++i) {
    vp.data[i] = v.data[perm[i]];
    pp.data[i] = p.data[perm[i]];
    for (int c = 0; c < 3; ++c) {
      up.data[3 * i + c] = u.data[3 * perm[i] + c];
      bp.data[3 * i + c] = b.data[3 * perm[i] + c];
    }
  }
  CHECK(data_fidelity(up, bp, vp) ==
        doctest::Approx(data_fidelity(u, b, v)).epsilon(1e-12));
  CHECK(cp_energy(vp, pp) == doctest::Approx(cp_energy(v, p)).epsilon(1e-12));
}
