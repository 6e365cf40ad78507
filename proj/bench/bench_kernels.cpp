// Throughput comparison: serial reference kernels vs the OpenMP versions.
// Usage: craq_bench [size] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "craq/energy.hpp"
#include "craq/ops.hpp"
#include "craq/parallel.hpp"
#include "craq/reference.hpp"
#include "craq/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

volatile double g_sink = 0.0;

template <typename F> double time_it(int repeats, F &&fn) {
  fn(); // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < repeats; ++i)
    g_sink = g_sink + fn();
  return seconds_since(t0) / repeats;
}

void report(const char *name, double serial_s, double parallel_s) {
  std::printf("%-18s serial %8.3f ms   openmp %8.3f ms   speedup %.2fx\n", name,
              serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

} // namespace

int main(int argc, char **argv) {
  craq::apply_thread_cap();
  const int n = argc > 1 ? std::atoi(argv[1]) : 512;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 20;

  craq::Rng rng(7);
  craq::ColorField u(n, n), b(n, n);
  craq::ScalarField v(n, n), s(n, n), p(n, n);
  for (double &x : u.data)
    x = rng.u01();
  for (double &x : b.data)
    x = rng.u01();
  for (double &x : v.data)
    x = rng.u01();
  for (double &x : s.data)
    x = rng.uniform(-3.0, 3.0);
  for (double &x : p.data)
    x = rng.u01();

  std::printf("field %dx%d, %d repeats, %d thread(s)\n", n, n, repeats,
              craq::thread_count());

  report("data_fidelity",
         time_it(repeats, [&] { return craq::reference::data_fidelity(u, b, v); }),
         time_it(repeats, [&] { return craq::data_fidelity(u, b, v); }));

  report("preg_energy",
         time_it(repeats, [&] { return craq::reference::preg_energy(b, v); }),
         time_it(repeats, [&] { return craq::preg_energy(b, v); }));

  report("creg_energy",
         time_it(repeats, [&] { return craq::reference::creg_energy(v, 0.005); }),
         time_it(repeats, [&] { return craq::creg_energy(v, 0.005); }));

  report("cp_energy",
         time_it(repeats, [&] { return craq::reference::cp_energy(v, p); }),
         time_it(repeats, [&] { return craq::cp_energy(v, p); }));

  report("sigmoid",
         time_it(repeats, [&] { return craq::reference::sigmoid(s).data[0]; }),
         time_it(repeats, [&] { return craq::sigmoid(s).data[0]; }));

  const std::vector<double> kernel = {0.05, 0.1, 0.2, 0.3, 0.2, 0.1, 0.05};
  report("correlate_rows",
         time_it(repeats, [&] { return craq::reference::correlate_rows(v, kernel).data[0]; }),
         time_it(repeats, [&] { return craq::correlate_rows(v, kernel).data[0]; }));
  report("correlate_cols",
         time_it(repeats, [&] { return craq::reference::correlate_cols(v, kernel).data[0]; }),
         time_it(repeats, [&] { return craq::correlate_cols(v, kernel).data[0]; }));

  // full objective forward+backward with the default priors
  const craq::BilinearGenerator gen(n, n, 4);
  const craq::LineFilterPrior prior(n, n);
  const craq::EnergyParams params;
  const craq::LatentCode z = gen.initial_latent(u);
  const double eval_s = time_it(std::max(1, repeats / 4), [&] {
    return craq::evaluate(u, z, s, u, gen, prior, params).breakdown.total;
  });
  std::printf("%-18s openmp %8.3f ms (forward+backward, bilinear:4 + line-filter)\n",
              "evaluate", eval_s * 1e3);

  return g_sink == 12345.0 ? 1 : 0;
}
