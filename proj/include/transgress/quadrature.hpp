#pragma once

// Integration of top-degree forms over chart domains and atlases:
// Gauss-Legendre on bounded axes, trapezoid on periodic axes, with a
// coarse/fine error estimate and singular-endpoint clipping for charts
// whose evaluators degenerate at an excluded coordinate (e.g. poles).

#include <span>

#include "transgress/exterior.hpp"

namespace transgress {

struct QuadratureSpec {
  int order = 24;            // Gauss-Legendre points per non-periodic axis
  int periodic_points = 96;  // trapezoid points per periodic axis (full period)
  int subdivision = 1;       // cells per axis

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Integral of a top-degree form over the full chart domain.
IntegralResult integrate(const KForm& form, const ChartDomain& domain,
                         const QuadratureSpec& spec);

// One piece of an atlas integral: a top form on its chart, the chart's
// integration sub-range, per-axis-end singular flags (sampling is clipped
// away from those ends and the strip deficit is added to the error
// estimate), and a coordinate-space tag. Pieces sharing a space tag must
// have non-overlapping ranges.
struct AtlasPiece {
  KForm form;
  std::array<Interval, kMaxDim> range{};
  std::array<std::array<bool, 2>, kMaxDim> singular_end{};
  int space = -1;
  double clip_margin = 0.0;  // extra stencil reach of the piece's evaluators
};

IntegralResult integrate_atlas(std::span<const AtlasPiece> pieces, const QuadratureSpec& spec,
                               double fd_step);

// Signed sum over the faces of the form's cube domain, outward orientation:
// sum_a (-1)^a (top_a - bottom_a); form degree must be dim - 1.
IntegralResult boundary_integral(const KForm& form, const QuadratureSpec& spec);

// Restriction of a form to one face of its (non-periodic) cube domain.
KForm restrict_to_face(const KForm& form, int axis, bool upper);

}  // namespace transgress
