#pragma once

// Declarative verification cases and their structured results. Scenarios
// are JSON data: geometry selection, field coefficients, declared zeros,
// and expected values with provenance and tolerances.

#include <json.hpp>

#include "transgress/quadrature.hpp"

namespace transgress {

using json = nlohmann::ordered_json;

struct ExpectedCheck {
  std::string id;
  double value = 0.0;
  std::string provenance;  // "exact", "closed-form", or "oracle"
  std::string oracle;      // oracle name when provenance == "oracle"
  double tol = 0.0;
};

struct ZeroSpec {
  std::vector<double> location;
  double isolation_radius = 0.0;
  bool auto_jacobian = true;
};

struct Scenario {
  std::string name;
  std::string kind;
  std::string geometry_name;
  std::vector<double> geometry_params;
  int chi = 0;
  std::string parity;  // "odd"/"even", validated against the geometry
  json field;  // field payload, kind-specific
  std::vector<ZeroSpec> zeros;
  QuadratureSpec quadrature{};
  json extra;  // cube counts, seeds, case selectors
  std::vector<ExpectedCheck> expected;

  const ExpectedCheck& expect(const std::string& id) const;
};

Scenario parse_scenario(const json& j);
Scenario parse_scenario_text(const std::string& text);

// The shipped scenario set, sorted by name.
const std::vector<Scenario>& builtin_scenarios();
const Scenario& find_scenario(const std::string& name);
std::vector<std::string> scenario_names();

struct CheckRecord {
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tolerance = 0.0;
  double error_estimate = 0.0;  // quadrature estimate where applicable
  bool pass = false;
  std::string provenance;
  std::string oracle;
  std::string note;
};

struct Report {
  std::string scenario;
  std::vector<CheckRecord> checks;
  QuadratureSpec quadrature{};
  double fd_step = 0.0;
  std::string timestamp;

  bool all_pass() const;
  json to_json() const;
};

std::string iso_timestamp_utc();

}  // namespace transgress
