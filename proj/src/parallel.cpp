#include "craq/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace craq {

int thread_count() {
#ifdef _OPENMP
  static const int cached = [] {
    int n = omp_get_max_threads();
    if (const char *env = std::getenv("CRAQ_THREADS")) {
      int cap = std::atoi(env);
      if (cap >= 1 && cap < n)
        n = cap;
    }
    return n;
  }();
  return cached;
#else
  return 1;
#endif
}

void apply_thread_cap() {
#ifdef _OPENMP
  omp_set_num_threads(thread_count());
#endif
}

} // namespace craq
