#pragma once

// Identity verifiers: each takes a scenario and produces a report with one
// record per check. run_scenario dispatches on the scenario kind.

#include <optional>

#include "transgress/scenario.hpp"

namespace transgress {

struct RunConfig {
  std::optional<int> order;
  std::optional<int> periodic_points;
  std::optional<int> subdivision;
  std::optional<double> fd_step;
  double fd_step_curvature = 1e-4;

  QuadratureSpec effective_spec(const Scenario& s) const;
  double effective_fd() const { return fd_step.value_or(1e-5); }
};

// boundary index sum against chi(X) plus the section integral
Report verify_index_identity(const Scenario& s, const RunConfig& cfg);
// fibre normalization, cube closedness, and the odd-n boundary/euler identity
Report verify_form_normalization(const Scenario& s, const RunConfig& cfg);
// 0-/infinity-section pairings, pointwise special cases, frame equivariance,
// and the connection-independence reruns
Report verify_section_properties(const Scenario& s, const RunConfig& cfg);
// the combination psi + half the euler form: zero on the infinity-section,
// one against the fibre
Report verify_thom_pairing(const Scenario& s, const RunConfig& cfg);
Report verify_gauss_bonnet(const Scenario& s, const RunConfig& cfg);

Report run_scenario(const Scenario& s, const RunConfig& cfg = {});

// Ambient polynomial / complex-power fields with exact Jacobians.
struct AmbientField {
  int dim = 0;
  VectorField value;
  MatrixField jacobian;
};
AmbientField build_field(const json& field_spec, int dim);

}  // namespace transgress
