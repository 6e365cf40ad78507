#ifndef CRAQ_RNG_HPP
#define CRAQ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace craq {

/// Seeded RNG with hand-pinned distributions so that sampled values are
/// identical across platforms and standard libraries.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(uint64_t seed) : engine(seed) {}

  /// Uniform in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Uniform integer in [lo, hi] by rejection-free modulo over 64 bits;
  /// bias is negligible for the small ranges used here.
  int randint(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine() % span);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = u01();
    double u2 = u01();
    if (u1 < 1e-300)
      u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

} // namespace craq

#endif
