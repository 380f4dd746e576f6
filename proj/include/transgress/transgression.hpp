#pragma once

// The transgression n-form on the unit-sphere bundle of a stabilized
// bundle: u and theta = du + omega.u for a section, the permutation sums
// Psi_j, the normalized Psi, and the Euler curvature form, all materialized
// as pullbacks onto integration charts.

#include "transgress/geometry.hpp"

namespace transgress {

// Volume of the round unit n-sphere.
double sphere_volume(int n);

// Exact integer double factorial, with 0!! = (-1)!! = 1.
long long double_factorial(int k);

// Connection and curvature entries materialized on a source chart.
struct ConnectionForms {
  int rank = 0;
  ChartDomain chart;
  FormMatrixField omega;
  FormMatrixField curvature;

  static ConnectionForms flat(int rank, const ChartDomain& chart);
  // Forms of the stabilized geometry on one of its base charts
  // (rank n+1, first row and column identically zero).
  static ConnectionForms on_chart(const StabilizedGeometry& geom, int chart_idx);
  // Composition with a base map: forms pulled onto base_map.source.
  ConnectionForms pulled_back(const SmoothMap& base_map) const;
};

// A map of a chart into the sphere bundle: unit-vector part u together with
// the connection data already living on the same source chart. Fibre
// inclusions use a constant base point (flat pulled-back connection).
struct SphereBundleMap {
  SmoothMap u;           // into R^rank, unit norm
  ConnectionForms conn;  // on u.source

  int n() const { return conn.rank - 1; }
};

// Standard parametrization of the fibre n-sphere, oriented so the fibre
// integral of Psi is +1; flat connection.
SphereBundleMap fiber_inclusion(int n);

// ---------------------------------------------------------------------------
// Pointwise assembly (value algebra)
// ---------------------------------------------------------------------------

// theta_i = du_i + sum_j omega_ij u_j
std::vector<FormValue> theta_value(const Vec& u, std::span<const FormValue> du,
                                   const FormMatrix& omega);

// Literal permutation sum over all (n+1)! terms.
FormValue psi_j_value(int n, int j, const Vec& u, std::span<const FormValue> theta,
                      const FormMatrix& curvature);

// Normalized sum over j of psi_j.
FormValue psi_value(int n, const Vec& u, std::span<const FormValue> theta,
                    const FormMatrix& curvature);

// Pfaffian-type permutation sum; rank must be even.
FormValue euler_value(const FormMatrix& curvature);

// ---------------------------------------------------------------------------
// Form-level operations
// ---------------------------------------------------------------------------

std::vector<KForm> theta(const SphereBundleMap& map);
KForm psi_j_form(const SphereBundleMap& map, int j);
KForm psi_form(const SphereBundleMap& map);
KForm euler_form(const ConnectionForms& conn);

// ---------------------------------------------------------------------------
// Sections of the sphere bundle over a geometry
// ---------------------------------------------------------------------------

struct BundleSection {
  const StabilizedGeometry* geom = nullptr;  // not owned; must outlive the section
  std::vector<SmoothMap> u;                  // one unit map per chart
};

// u = (a, <V_T, frame>) / |(a, V_T)|, first slot the outward-normal
// component. Rejects fields whose norm falls under 1e-6 on a sample.
BundleSection section_from_vector_field(const StabilizedGeometry& geom,
                                        const std::vector<BoundaryField>& field,
                                        double fd_step = 1e-5);

// The 0-section (nu_sign = +1) or the infinity-section (nu_sign = -1).
BundleSection constant_section(const StabilizedGeometry& geom, double nu_sign);

// alpha*(Psi) on every chart of the section's geometry.
std::vector<KForm> section_psi_pullback(const BundleSection& section);

}  // namespace transgress
