#ifndef CRAQ_REFERENCE_HPP
#define CRAQ_REFERENCE_HPP

#include <vector>

#include "craq/field.hpp"

namespace craq::reference {

// Plain serial implementations of the hot kernels. The OpenMP versions in
// craq:: are checked against these; the benchmark compares their throughput.

ScalarField sigmoid(const ScalarField &s);
double data_fidelity(const ColorField &u, const ColorField &b, const ScalarField &v);
double preg_energy(const ColorField &b, const ScalarField &v);
double creg_energy(const ScalarField &v, double epsilon);
double cp_energy(const ScalarField &v, const ScalarField &p_map);

ScalarField correlate_rows(const ScalarField &f, const std::vector<double> &k);
ScalarField correlate_cols(const ScalarField &f, const std::vector<double> &k);

/// One standard-mode Adam update over a flat block.
void adam_update(std::vector<double> &x, const std::vector<double> &g,
                 std::vector<double> &m, std::vector<double> &w, long k,
                 double gamma, double beta1, double beta2, double margin);

} // namespace craq::reference

#endif
