#pragma once

// Base geometries: chart atlases with Riemannian metric, oriented
// orthonormal frames, so(n)-valued connection 1-forms, curvature, and the
// rank-stabilization that prepends a trivial flat line (new first slot).

#include <optional>
#include <random>
#include <string>

#include "transgress/exterior.hpp"
#include "transgress/quadrature.hpp"

namespace transgress {

struct GeometryChart {
  std::string name;
  ChartDomain domain;
  std::array<Interval, kMaxDim> integration_range{};
  std::array<std::array<bool, 2>, kMaxDim> singular_end{};
  int space = -1;
  // minimum distance between sampling and a singular end; covers the reach
  // of any difference stencils hidden inside the chart's evaluators
  double clip_margin = 0.0;

  SmoothMap embedding;          // chart -> ambient, optional (value may be null)
  VectorField outward_normal;   // ambient unit normal, optional
  MatrixField metric;           // base_dim x base_dim
  MatrixField frame;            // base_dim x n, columns = frame fields in chart
                                // coordinates; null for bundles framed globally
  FormMatrixField omega;        // n x n antisymmetric 1-form values
  FormMatrixField curvature;    // n x n antisymmetric 2-form values

  bool has_embedding() const { return static_cast<bool>(embedding.value); }
};

struct FramedGeometry {
  std::string name;
  int n = 0;         // fibre dimension of the bundle
  int base_dim = 0;
  std::vector<GeometryChart> charts;
};

struct GeomConfig {
  double fd_step = 1e-5;            // first-level differentiation
  double fd_step_curvature = 1e-4;  // step for differentiating an already
                                    // difference-based connection
};

// circle_flat, sphere_round(R), torus_flat(r1, r2), ellipsoid(a, b, c),
// trivial_plane_over_s2. Non-positive shape parameters are rejected.
FramedGeometry builtin_geometry(const std::string& name, std::span<const double> params,
                                const GeomConfig& cfg = {});

// Frame matrix split as B(a,k) = smooth(a,k) * column_scale_k. Near a chart
// pole the scale part (e.g. 1/sin) is differentiated analytically, so the
// difference stencil only ever touches the smooth factor.
struct FrameDecomposition {
  MatrixField smooth;
  VectorField column_scale;       // null means all ones
  MatrixField column_scale_grad;  // (axis, k) entries; null means zero
};

// Torsion-free metric connection of an orthonormal frame, built pointwise
// from finite-difference frame brackets.
FormMatrixField levi_civita_from_metric(MatrixField metric, ChartDomain chart,
                                        FrameDecomposition frame, int n, double h);
FormMatrixField levi_civita_from_metric(MatrixField metric, ChartDomain chart,
                                        MatrixField frame, int n, double h);

// Omega = d(omega) + omega ^ omega, entrywise.
FormMatrixField curvature_from_connection(FormMatrixField omega, ChartDomain chart, int rank,
                                          double h);

// Residual of the first structure equation de^i + omega_ij ^ e^j at a point;
// near zero for a torsion-free connection.
double torsion_residual(const GeometryChart& chart, int n, const Point& p, double h);

struct StabilizedGeometry {
  FramedGeometry base;
  int rank() const { return base.n + 1; }
  // (n+1)-rank forms with identically zero first row and column.
  FormMatrix omega_e(int chart, const Point& p) const;
  FormMatrix curvature_e(int chart, const Point& p) const;
};

StabilizedGeometry stabilize(FramedGeometry geom);

// Gauge transform by a pointwise special-orthogonal matrix per chart:
// frame -> frame.g, omega -> g^T omega g + g^T dg, curvature -> g^T curv g.
FramedGeometry frame_change(const FramedGeometry& geom, std::vector<MatrixField> g_per_chart,
                            double h);

// Atlas integral of one top form per chart (pole-clipped per chart flags).
IntegralResult integrate_over_atlas(const std::vector<KForm>& form_per_chart,
                                    const FramedGeometry& geom, const QuadratureSpec& spec,
                                    double fd_step);

// Boundary data of an ambient vector field along an embedded chart:
// outward-normal component and tangential frame components.
struct BoundaryField {
  ScalarField normal;
  VectorField tangential;  // length n, frame components
};
BoundaryField boundary_field_from_ambient(const GeometryChart& chart, int n, VectorField ambient);

// Uniform sample in the chart box, singular ends padded by `margin`.
Point sample_chart_point(const GeometryChart& chart, std::mt19937_64& rng, double margin = 1e-3);

}  // namespace transgress
