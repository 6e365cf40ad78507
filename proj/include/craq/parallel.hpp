#ifndef CRAQ_PARALLEL_HPP
#define CRAQ_PARALLEL_HPP

#include <vector>

namespace craq {

/// Worker count used by the OpenMP kernels: min(hardware, CRAQ_THREADS).
/// Read once; returns 1 when built without OpenMP.
int thread_count();

/// Apply the cap returned by thread_count() to the OpenMP runtime.
void apply_thread_cap();

/// Fields below this many samples run serial: region spawn/join costs more
/// than the loop body on small tiles.
constexpr int kParallelCutoff = 32768;

/// Deterministic parallel reduction: per-row partial sums computed in
/// parallel, then accumulated in row order. Bit-identical for any thread
/// count, which the solver's reproducibility contract relies on.
/// `work` is the total sample count, used for the serial cutoff.
template <typename RowTerm>
double row_sum(int rows, long work, RowTerm &&term) {
  std::vector<double> partial(static_cast<size_t>(rows), 0.0);
#pragma omp parallel for schedule(static) if (work >= kParallelCutoff)
  for (int r = 0; r < rows; ++r)
    partial[r] = term(r);
  double total = 0.0;
  for (int r = 0; r < rows; ++r)
    total += partial[r];
  return total;
}

} // namespace craq

#endif
