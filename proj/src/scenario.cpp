#include "transgress/scenario.hpp"

#include <algorithm>
#include <ctime>

namespace transgress {

const ExpectedCheck& Scenario::expect(const std::string& id) const {
  for (const ExpectedCheck& e : expected)
    if (e.id == id) return e;
  throw std::invalid_argument("scenario '" + name + "' has no expected value '" + id + "'");
}

Scenario parse_scenario(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.kind = j.at("kind").get<std::string>();
  if (j.contains("geometry")) {
    s.geometry_name = j["geometry"].at("name").get<std::string>();
    if (j["geometry"].contains("params"))
      s.geometry_params = j["geometry"]["params"].get<std::vector<double>>();
  }
  s.chi = j.value("chi", 0);
  s.parity = j.value("parity", std::string());
  if (j.contains("field")) s.field = j["field"];
  if (j.contains("zeros")) {
    for (const json& z : j["zeros"]) {
      ZeroSpec zs;
      zs.location = z.at("location").get<std::vector<double>>();
      zs.isolation_radius = z.at("isolation_radius").get<double>();
      zs.auto_jacobian = z.value("jacobian", std::string("auto")) == "auto";
      s.zeros.push_back(std::move(zs));
    }
  }
  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    s.quadrature.order = q.value("order", s.quadrature.order);
    s.quadrature.periodic_points = q.value("periodic_points", s.quadrature.periodic_points);
    s.quadrature.subdivision = q.value("subdivision", s.quadrature.subdivision);
  }
  if (j.contains("extra")) s.extra = j["extra"];
  for (const json& e : j.at("expected")) {
    ExpectedCheck ec;
    ec.id = e.at("id").get<std::string>();
    ec.value = e.at("value").get<double>();
    ec.provenance = e.at("provenance").get<std::string>();
    ec.oracle = e.value("oracle", std::string());
    ec.tol = e.at("tol").get<double>();
    s.expected.push_back(std::move(ec));
  }
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  return parse_scenario(json::parse(text));
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

json Report::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["checks"] = json::array();
  for (const CheckRecord& c : checks) {
    json cj;
    cj["check_id"] = c.check_id;
    cj["lhs"] = c.lhs;
    cj["rhs"] = c.rhs;
    cj["abs_err"] = c.abs_err;
    cj["tolerance"] = c.tolerance;
    cj["error_estimate"] = c.error_estimate;
    cj["pass"] = c.pass;
    cj["provenance"] = c.provenance;
    if (!c.oracle.empty()) cj["oracle"] = c.oracle;
    if (!c.note.empty()) cj["note"] = c.note;
    j["checks"].push_back(std::move(cj));
  }
  j["quadrature"] = {{"order", quadrature.order},
                     {"periodic_points", quadrature.periodic_points},
                     {"subdivision", quadrature.subdivision}};
  j["fd_step"] = fd_step;
  j["timestamp"] = timestamp;
  return j;
}

std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Shipped scenarios
// ---------------------------------------------------------------------------

namespace {

// Boundary index identities on the disk: V(z) = z^d on the unit circle,
// extended by z^d (or conj(z)^|d| for d < 0) with its single zero declared.
json disk_winding(int d) {
  std::string suffix = d < 0 ? "m" + std::to_string(-d) : std::to_string(d);
  json j = {
      {"name", "disk_winding_d" + suffix},
      {"kind", "index_identity"},
      {"geometry", {{"name", "circle_flat"}, {"params", json::array()}}},
      {"chi", 1},
      {"parity", "odd"},
      {"field", {{"kind", "complex_power"}, {"power", d}}},
      {"zeros", json::array()},
      {"expected",
       json::array(
           {{{"id", "sum_indices"},
             {"value", d},
             {"provenance", "oracle"},
             {"oracle", "winding_accumulation"},
             {"tol", 0.0}},
            {{"id", "alpha_psi_integral"},
             {"value", d - 1},
             {"provenance", "oracle"},
             {"oracle", "winding_accumulation"},
             {"tol", 1e-6}},
            {{"id", "index_identity"},
             {"value", 0.0},
             {"provenance", "closed-form"},
             {"tol", 1e-6}}})},
  };
  if (d != 0)
    j["zeros"].push_back(
        {{"location", {0.0, 0.0}}, {"isolation_radius", 0.5}, {"jacobian", "auto"}});
  return j;
}

json builtin_scenarios_json() {
  json all = json::array();

  for (int d = -2; d <= 3; ++d) all.push_back(disk_winding(d));

  // ball scenarios: n = 2 over the round boundary sphere
  all.push_back(json::parse(R"({
    "name": "ball_shift_centered",
    "kind": "index_identity",
    "geometry": {"name": "sphere_round", "params": [1.0]},
    "chi": 1,
    "parity": "even",
    "field": {"kind": "polynomial", "components": [
      [{"c": 1.0, "powers": [1, 0, 0]}],
      [{"c": 1.0, "powers": [0, 1, 0]}],
      [{"c": 1.0, "powers": [0, 0, 1]}]
    ]},
    "zeros": [{"location": [0.0, 0.0, 0.0], "isolation_radius": 0.4, "jacobian": "auto"}],
    "expected": [
      {"id": "sum_indices", "value": 1.0, "provenance": "oracle", "oracle": "jacobian_sign", "tol": 0.0},
      {"id": "alpha_psi_integral", "value": 1.0, "provenance": "oracle", "oracle": "outward_homotopy", "tol": 1e-6},
      {"id": "index_identity", "value": 0.0, "provenance": "closed-form", "tol": 1e-6}
    ]
  })"));
  all.push_back(json::parse(R"({
    "name": "ball_shift_offset",
    "kind": "index_identity",
    "geometry": {"name": "sphere_round", "params": [1.0]},
    "chi": 1,
    "parity": "even",
    "field": {"kind": "polynomial", "components": [
      [{"c": 1.0, "powers": [1, 0, 0]}, {"c": -0.25, "powers": [0, 0, 0]}],
      [{"c": 1.0, "powers": [0, 1, 0]}, {"c": 0.15, "powers": [0, 0, 0]}],
      [{"c": 1.0, "powers": [0, 0, 1]}, {"c": -0.30, "powers": [0, 0, 0]}]
    ]},
    "zeros": [{"location": [0.25, -0.15, 0.30], "isolation_radius": 0.3, "jacobian": "auto"}],
    "expected": [
      {"id": "sum_indices", "value": 1.0, "provenance": "oracle", "oracle": "jacobian_sign", "tol": 0.0},
      {"id": "alpha_psi_integral", "value": 1.0, "provenance": "oracle", "oracle": "outward_homotopy", "tol": 1e-6},
      {"id": "index_identity", "value": 0.0, "provenance": "closed-form", "tol": 1e-6}
    ]
  })"));
  all.push_back(json::parse(R"({
    "name": "ball_saddle",
    "kind": "index_identity",
    "geometry": {"name": "sphere_round", "params": [1.0]},
    "chi": 1,
    "parity": "even",
    "field": {"kind": "polynomial", "components": [
      [{"c": 1.0, "powers": [1, 0, 0]}],
      [{"c": 1.0, "powers": [0, 1, 0]}],
      [{"c": 1.0, "powers": [0, 0, 2]}, {"c": -0.25, "powers": [0, 0, 0]}]
    ]},
    "zeros": [
      {"location": [0.0, 0.0, 0.5], "isolation_radius": 0.3, "jacobian": "auto"},
      {"location": [0.0, 0.0, -0.5], "isolation_radius": 0.3, "jacobian": "auto"}
    ],
    "expected": [
      {"id": "sum_indices", "value": 0.0, "provenance": "oracle", "oracle": "jacobian_sign", "tol": 0.0},
      {"id": "alpha_psi_integral", "value": 0.0, "provenance": "oracle", "oracle": "jacobian_sign", "tol": 1e-6},
      {"id": "index_identity", "value": 0.0, "provenance": "closed-form", "tol": 1e-6}
    ]
  })"));

  // fibre normalization
  for (int n : {1, 2, 3}) {
    const char* names[] = {"fiber_circle", "fiber_sphere", "fiber_threesphere"};
    all.push_back(json{{"name", names[n - 1]},
                       {"kind", "fiber_normalization"},
                       {"extra", {{"n", n}}},
                       {"expected", json::array({{{"id", "fiber_integral"},
                                                  {"value", 1.0},
                                                  {"provenance", "closed-form"},
                                                  {"tol", 1e-8}}})}});
  }

  // closedness over random cubes, sphere-bundle-shaped connection
  struct CubeSet {
    const char* name;
    int n, count, seed;
  };
  for (CubeSet cs : {CubeSet{"stokes_cubes_n1", 1, 34, 501}, CubeSet{"stokes_cubes_n2", 2, 33, 502},
                     CubeSet{"stokes_cubes_n3", 3, 33, 503}}) {
    all.push_back(json{{"name", cs.name},
                       {"kind", "stokes_cubes"},
                       {"quadrature", {{"order", 8}}},
                       {"extra", {{"n", cs.n}, {"cubes", cs.count}, {"seed", cs.seed}}},
                       {"expected", json::array({{{"id", "max_boundary_ratio"},
                                                  {"value", 0.0},
                                                  {"provenance", "closed-form"},
                                                  {"tol", 1e-5}}})}});
  }

  // odd-n transgression against the euler mass, full connection
  for (CubeSet cs : {CubeSet{"transgression_cubes_n1", 1, 20, 601},
                     CubeSet{"transgression_cubes_n3", 3, 20, 602}}) {
    all.push_back(json{{"name", cs.name},
                       {"kind", "transgression_cubes"},
                       {"quadrature", {{"order", 8}}},
                       {"extra", {{"n", cs.n}, {"cubes", cs.count}, {"seed", cs.seed}}},
                       {"expected", json::array({{{"id", "max_residual_ratio"},
                                                  {"value", 0.0},
                                                  {"provenance", "closed-form"},
                                                  {"tol", 1.0}}})}});
  }

  // gauss-bonnet regression
  struct GbCase {
    const char* name;
    const char* geom;
    json params;
    double chi;
  };
  for (GbCase gc : {GbCase{"gauss_bonnet_sphere", "sphere_round", {1.0}, 2.0},
                    GbCase{"gauss_bonnet_ellipsoid", "ellipsoid", {1.0, 1.0, 1.2}, 2.0},
                    GbCase{"gauss_bonnet_torus", "torus_flat", {1.5, 1.0}, 0.0}}) {
    all.push_back(json{{"name", gc.name},
                       {"kind", "gauss_bonnet"},
                       {"geometry", {{"name", gc.geom}, {"params", gc.params}}},
                       {"expected", json::array({{{"id", "euler_integral"},
                                                  {"value", gc.chi},
                                                  {"provenance", "exact"},
                                                  {"tol", 1e-6}}})}});
  }

  // section pairings over the compactified bundles
  struct SectionCase {
    const char* name;
    const char* geom;
    const char* section;
    double value;
  };
  for (SectionCase sc :
       {SectionCase{"infty_section_sphere", "sphere_round", "infinity", -1.0},
        SectionCase{"zero_section_sphere", "sphere_round", "zero", 1.0},
        SectionCase{"infty_section_trivial", "trivial_plane_over_s2", "infinity", 0.0},
        SectionCase{"zero_section_trivial", "trivial_plane_over_s2", "zero", 0.0}}) {
    json params = std::string(sc.geom) == "sphere_round" ? json::array({1.0}) : json::array();
    all.push_back(json{{"name", sc.name},
                       {"kind", "section_property"},
                       {"geometry", {{"name", sc.geom}, {"params", params}}},
                       {"extra", {{"section", sc.section}}},
                       {"expected", json::array({{{"id", "section_integral"},
                                                  {"value", sc.value},
                                                  {"provenance", "closed-form"},
                                                  {"tol", 1e-6}}})}});
  }

  // thom-class shadow: psi + half the euler form restricts to zero on the
  // infinity-section and pairs to one with the fibre
  for (const char* geom : {"sphere_round", "trivial_plane_over_s2"}) {
    std::string name = std::string("thom_shadow_") +
                       (std::string(geom) == "sphere_round" ? "sphere" : "trivial");
    json params = std::string(geom) == "sphere_round" ? json::array({1.0}) : json::array();
    all.push_back(json{
        {"name", name},
        {"kind", "thom_shadow"},
        {"geometry", {{"name", geom}, {"params", params}}},
        {"expected",
         json::array({{{"id", "infinity_combination"},
                       {"value", 0.0},
                       {"provenance", "closed-form"},
                       {"tol", 1e-6}},
                      {{"id", "fiber_combination"},
                       {"value", 1.0},
                       {"provenance", "closed-form"},
                       {"tol", 1e-6}}})}});
  }

  // pointwise special cases of boundary fields
  struct PointwiseCase {
    const char* name;
    const char* which;
  };
  for (PointwiseCase pc : {PointwiseCase{"pointwise_outward_circle", "outward_circle"},
                           PointwiseCase{"pointwise_outward_sphere", "outward_sphere"},
                           PointwiseCase{"pointwise_tangent_circle", "tangent_circle"},
                           PointwiseCase{"pointwise_tangent_torus", "tangent_torus"}}) {
    all.push_back(json{{"name", pc.name},
                       {"kind", "pointwise_special"},
                       {"extra", {{"case", pc.which}, {"samples", 1000}, {"seed", 811}}},
                       {"expected", json::array({{{"id", "max_pointwise_deviation"},
                                                  {"value", 0.0},
                                                  {"provenance", "exact"},
                                                  {"tol", 1e-8}}})}});
  }

  // pointwise frame equivariance of psi
  all.push_back(json::parse(R"({
    "name": "frame_equivariance_flat",
    "kind": "frame_equivariance",
    "geometry": {"name": "torus_flat", "params": [1.5, 1.0]},
    "extra": {"frames": 20, "samples": 40, "seed": 77},
    "expected": [
      {"id": "max_frame_deviation", "value": 0.0, "provenance": "exact", "tol": 1e-9}
    ]
  })"));
  all.push_back(json::parse(R"({
    "name": "frame_equivariance_curved",
    "kind": "frame_equivariance",
    "geometry": {"name": "ellipsoid", "params": [1.0, 1.0, 1.2]},
    "extra": {"frames": 20, "samples": 40, "seed": 78},
    "expected": [
      {"id": "max_frame_deviation", "value": 0.0, "provenance": "exact", "tol": 1e-6}
    ]
  })"));

  // the same integer pairings on a different metric for the same topology
  all.push_back(json::parse(R"({
    "name": "ellipsoid_sections",
    "kind": "connection_independence",
    "geometry": {"name": "ellipsoid", "params": [1.0, 1.0, 1.2]},
    "expected": [
      {"id": "fiber_integral", "value": 1.0, "provenance": "closed-form", "tol": 1e-5},
      {"id": "zero_section_integral", "value": 1.0, "provenance": "closed-form", "tol": 1e-5},
      {"id": "infinity_section_integral", "value": -1.0, "provenance": "closed-form", "tol": 1e-5}
    ]
  })"));

  return all;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> scenarios = [] {
    std::vector<Scenario> out;
    for (const json& j : builtin_scenarios_json()) out.push_back(parse_scenario(j));
    std::sort(out.begin(), out.end(),
              [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
    return out;
  }();
  return scenarios;
}

const Scenario& find_scenario(const std::string& name) {
  for (const Scenario& s : builtin_scenarios())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const Scenario& s : builtin_scenarios()) names.push_back(s.name);
  return names;
}

}  // namespace transgress
