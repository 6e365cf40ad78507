#ifndef CRAQ_ENERGY_HPP
#define CRAQ_ENERGY_HPP

#include "craq/field.hpp"
#include "craq/priors.hpp"

namespace craq {

/// Regularization weights and the transition width of the crack-regularity
/// term. Defaults are the tuned values the detection pipeline runs with.
struct EnergyParams {
  double lambda_preg = 1.0;
  double lambda_creg = 0.1;
  double lambda_cp = 0.5;
  double epsilon = 0.005;
};

struct EnergyBreakdown {
  double data_fidelity = 0.0;
  double preg = 0.0;
  double creg = 0.0;
  double cp = 0.0;
  double total = 0.0;
};

/// Elementwise logistic, numerically stable for |s| up to ~700.
ScalarField sigmoid(const ScalarField &s);

/// sum_{x,c} v_x^2 (U_{x,c} - B_{x,c})^2; v broadcast over channels.
double data_fidelity(const ColorField &u, const ColorField &b, const ScalarField &v);

/// Painting regularity: sum_x v_x^2 sum_c |grad B_c|^2_x.
double preg_energy(const ColorField &b, const ScalarField &v);

/// Crack regularity: sum_x [ eps |grad v|^2_x + (v_x - 1)^2 / (4 eps) ].
double creg_energy(const ScalarField &v, double epsilon);

/// Crack-prior consistency: sum_x (v_x - p_x)^2.
double cp_energy(const ScalarField &v, const ScalarField &p_map);

/// Full objective at (z, s, U'): v = sigmoid(s), B = G(z), p = P(U').
EnergyBreakdown total_energy(const ColorField &u, const LatentCode &z,
                             const ScalarField &s, const ColorField &uprime,
                             const GeneratorPrior &gen, const CrackPrior &prior,
                             const EnergyParams &params);

struct EnergyGradients {
  ScalarField grad_s;
  LatentCode grad_z;
  ColorField grad_uprime;
};

/// Exact analytic gradients of total_energy with respect to s, z and U'.
/// The |grad .|^2 terms are assembled through grad_adjoint, the prior terms
/// through the priors' vector-Jacobian products.
EnergyGradients gradients(const ColorField &u, const LatentCode &z,
                          const ScalarField &s, const ColorField &uprime,
                          const GeneratorPrior &gen, const CrackPrior &prior,
                          const EnergyParams &params);

/// One forward/backward pass returning both; what the solver iterates on.
struct EnergyEvaluation {
  EnergyBreakdown breakdown;
  EnergyGradients grads;
};
EnergyEvaluation evaluate(const ColorField &u, const LatentCode &z,
                          const ScalarField &s, const ColorField &uprime,
                          const GeneratorPrior &gen, const CrackPrior &prior,
                          const EnergyParams &params);

} // namespace craq

#endif
