#pragma once

// Poincare-Hopf indices of isolated vector-field zeros: Jacobian sign for
// nondegenerate zeros, normalized-field degree integrals as the general
// path. Degree integrals reuse the flat transgression form, so both sides
// of the index identity share one normalization.

#include <optional>

#include "transgress/transgression.hpp"

namespace transgress {

struct IsolatedZero {
  Vec location;
  std::optional<MatrixField> jacobian;  // ambient derivative of the field
  double isolation_radius = 0.0;
};

// sign(det DV) at the zero; rejects a near-singular Jacobian.
int index_nondegenerate(const IsolatedZero& zero);

// Degree of v -> V(v)/|V(v)| on the radius-r sphere around center,
// dim in {2, 3}. The rounding residual must come out below 1e-3.
int index_by_degree(const VectorField& field, const Vec& center, double radius, int dim,
                    const QuadratureSpec& spec = {});

// Sum of indices over declared zeros; nondegenerate where a Jacobian with
// clearly nonzero determinant is supplied, degree integral otherwise.
// Isolation balls must be pairwise disjoint and interior to the radius-R
// ball the field lives on.
int sum_indices(std::span<const IsolatedZero> zeros, const VectorField& field, int dim,
                double domain_radius, const QuadratureSpec& spec = {});

}  // namespace transgress
