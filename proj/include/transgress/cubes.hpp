#pragma once

// Deterministic synthetic sphere-bundle maps over small (n+1)-cubes:
// a smooth antisymmetric connection with trigonometric coefficients, its
// curvature, and a nowhere-degenerate unit map. Used by the closedness and
// transgression property checks.

#include "transgress/transgression.hpp"

namespace transgress {

struct CubeCase {
  SphereBundleMap map;
  double scale = 0.0;  // edge length of the cube
};

// stabilized_shape: first row and column of the connection vanish (the
// sphere-bundle case); otherwise a full special-orthogonal connection.
CubeCase make_synthetic_cube(int n, bool stabilized_shape, uint64_t seed, double fd_step);

}  // namespace transgress
