#ifndef CRAQ_OPS_HPP
#define CRAQ_OPS_HPP

#include <vector>

#include "craq/field.hpp"

namespace craq {

/// Rec.601 luminance, 0.299 R + 0.587 G + 0.114 B.
ScalarField to_grayscale(const ColorField &image);

/// Forward differences with unit pixel spacing; dx[.,w-1] = 0, dy[h-1,.] = 0.
GradientPair grad_forward(const ScalarField &field);

/// Exact adjoint of grad_forward (equals -div under the Neumann convention):
/// <grad_forward(f), g> = <f, grad_adjoint(g)> for all f, g.
ScalarField grad_adjoint(const GradientPair &pair);

/// Otsu threshold on a 256-bin histogram over [0,1]. Returns the bin-center
/// threshold maximizing between-class variance; ties break toward the
/// smallest threshold. A single-occupied-bin histogram (constant field) has
/// no information, so the occupied bin's upper edge is returned to keep the
/// subsequent strict-> binarization all-zero.
double otsu_threshold(const ScalarField &field);

/// 1 where sample > threshold, else 0.
ScalarField binarize(const ScalarField &field, double threshold);

// 1-D correlation along rows/columns with clamp-to-edge padding, and the
// exact adjoints. Building blocks for the separable filter bank; kept public
// so the adjoint identities can be tested directly.

/// out[y][x] = sum_s k[s] * f[y][clamp(x + s - radius)], radius = k.size()/2.
ScalarField correlate_rows(const ScalarField &f, const std::vector<double> &k);
ScalarField correlate_cols(const ScalarField &f, const std::vector<double> &k);

ScalarField correlate_rows_adjoint(const ScalarField &cotangent,
                                   const std::vector<double> &k);
ScalarField correlate_cols_adjoint(const ScalarField &cotangent,
                                   const std::vector<double> &k);

} // namespace craq

#endif
