#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "oracles.hpp"
#include "transgress/cli.hpp"
#include "transgress/geometry.hpp"
#include "transgress/transgression.hpp"
#include "transgress/verify.hpp"

using namespace transgress;
using namespace transgress::testing;

namespace {
constexpr double kPi = std::numbers::pi;

json strip_timestamps(json j) {
  if (j.contains("timestamp")) j.erase("timestamp");
  if (j.contains("reports"))
    for (json& r : j["reports"]) r.erase("timestamp");
  return j;
}

int run_cli_args(std::vector<std::string> args) {
  std::vector<const char*> argv{"transgress"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("scenario JSON round-trips through the parser") {
  Scenario s = parse_scenario_text(R"({
    "name": "example",
    "kind": "index_identity",
    "geometry": {"name": "circle_flat", "params": []},
    "chi": 1,
    "field": {"kind": "complex_power", "power": 2},
    "zeros": [{"location": [0.0, 0.0], "isolation_radius": 0.5, "jacobian": "auto"}],
    "quadrature": {"order": 12},
    "expected": [
      {"id": "sum_indices", "value": 2.0, "provenance": "oracle",
       "oracle": "winding_accumulation", "tol": 0.0}
    ]
  })");
  CHECK(s.name == "example");
  CHECK(s.chi == 1);
  CHECK(s.quadrature.order == 12);
  CHECK(s.quadrature.periodic_points == 96);
  CHECK(s.zeros.size() == 1);
  CHECK(s.expect("sum_indices").oracle == "winding_accumulation");
  CHECK_THROWS_AS(s.expect("missing"), std::invalid_argument);
}

TEST_CASE("every shipped expected value carries provenance, oracles where derived") {
  for (const Scenario& s : builtin_scenarios()) {
    CAPTURE(s.name);
    CHECK(!s.expected.empty());
    for (const ExpectedCheck& e : s.expected) {
      CHECK((e.provenance == "exact" || e.provenance == "closed-form" ||
             e.provenance == "oracle"));
      if (e.provenance == "oracle") CHECK(!e.oracle.empty());
    }
  }
}

TEST_CASE("disk boundary sections wind d-1 times") {
  // the section map, against the angle-accumulation oracle
  RunConfig cfg;
  GeomConfig gc;
  FramedGeometry circle = builtin_geometry("circle_flat", {}, gc);
  StabilizedGeometry stab = stabilize(std::move(circle));
  for (int d : {-2, 0, 1, 3}) {
    CAPTURE(d);
    AmbientField field = build_field(json{{"kind", "complex_power"}, {"power", d}}, 2);
    std::vector<BoundaryField> bfs{
        boundary_field_from_ambient(stab.base.charts[0], 1, field.value)};
    BundleSection sec = section_from_vector_field(stab, bfs);

    // u(theta) as a complex number, winding by accumulation
    auto u_fn = [&sec](std::complex<double> z) {
      double t = std::arg(z);
      Vec u = sec.u[0].value(Point{t});
      return std::complex<double>(u[0], u[1]);
    };
    CHECK(winding_oracle(u_fn, {0.0, 0.0}, 1.0) == d - 1);

    // unit-norm section invariant
    for (double t : {0.1, 2.0, 4.4})
      CHECK(std::abs(sec.u[0].value(Point{t}).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("constant fields give the 0- and infinity-sections") {
  GeomConfig gc;
  FramedGeometry sphere = builtin_geometry("sphere_round", std::vector<double>{1.0}, gc);
  StabilizedGeometry stab = stabilize(std::move(sphere));
  // V = outward normal: a = 1, tangential 0
  AmbientField outward = build_field(json{{"kind", "polynomial"},
                                          {"components",
                                           {json::array({{{"c", 1.0}, {"powers", {1, 0, 0}}}}),
                                            json::array({{{"c", 1.0}, {"powers", {0, 1, 0}}}}),
                                            json::array({{{"c", 1.0}, {"powers", {0, 0, 1}}}})}}},
                                     3);
  std::vector<BoundaryField> bfs;
  for (const GeometryChart& ch : stab.base.charts)
    bfs.push_back(boundary_field_from_ambient(ch, 2, outward.value));
  BundleSection sec = section_from_vector_field(stab, bfs);
  Point p{0.9, 2.1};
  Vec u = sec.u[0].value(p);
  CHECK(u[0] == doctest::Approx(1.0));
  CHECK(std::abs(u[1]) < 1e-12);
  CHECK(std::abs(u[2]) < 1e-12);
}

TEST_CASE("a vanishing boundary field is rejected") {
  GeomConfig gc;
  FramedGeometry circle = builtin_geometry("circle_flat", {}, gc);
  StabilizedGeometry stab = stabilize(std::move(circle));
  std::vector<BoundaryField> bfs(1);
  bfs[0].normal = [](const Point&) { return 1e-9; };
  bfs[0].tangential = [](const Point&) { return Vec{0.0}; };
  CHECK_THROWS_WITH_AS(section_from_vector_field(stab, bfs), "vector field vanishes on boundary",
                       std::invalid_argument);
}

TEST_CASE("theorem reports fail inconclusively when the tolerance cannot be certified") {
  Scenario s = find_scenario("disk_winding_d2");
  // absurdly tight tolerance: the quadrature error estimate cannot certify it
  for (ExpectedCheck& e : s.expected)
    if (e.id == "alpha_psi_integral") e.tol = 1e-18;
  RunConfig cfg;
  Report r = run_scenario(s, cfg);
  for (const CheckRecord& c : r.checks)
    if (c.check_id == "alpha_psi_integral") {
      CHECK_FALSE(c.pass);
      CHECK(c.note == "inconclusive");
    }
}

TEST_CASE("reports are byte-identical across reruns, timestamps aside") {
  RunConfig cfg;
  Report a = run_scenario(find_scenario("gauss_bonnet_sphere"), cfg);
  Report b = run_scenario(find_scenario("gauss_bonnet_sphere"), cfg);
  CHECK(strip_timestamps(a.to_json()).dump() == strip_timestamps(b.to_json()).dump());
}

TEST_CASE("report JSON carries the schema fields") {
  RunConfig cfg;
  Report r = run_scenario(find_scenario("fiber_circle"), cfg);
  json j = r.to_json();
  CHECK(j.at("scenario") == "fiber_circle");
  CHECK(j.at("checks").is_array());
  const json& c = j["checks"][0];
  for (const char* key : {"check_id", "lhs", "rhs", "abs_err", "tolerance", "pass", "provenance"})
    CHECK(c.contains(key));
  CHECK(j.contains("quadrature"));
  CHECK(j.contains("fd_step"));
  CHECK(j.contains("timestamp"));
}

TEST_CASE("verdicts are stable across difference steps") {
  // the default step is exercised everywhere else; run the whole set at the
  // sweep extremes
  for (double h : {1e-4, 1e-6}) {
    CAPTURE(h);
    RunConfig cfg;
    cfg.fd_step = h;
    for (const Scenario& s : builtin_scenarios()) {
      CAPTURE(s.name);
      CHECK(run_scenario(s, cfg).all_pass());
    }
  }
}

TEST_CASE("cli: verify writes a JSON report and returns 0") {
  std::string out = "/tmp/transgress_test_report.json";
  std::remove(out.c_str());
  CHECK(run_cli_args({"verify", "--scenario", "disk_winding_d2", "--out", out}) == 0);
  std::ifstream in(out);
  REQUIRE(static_cast<bool>(in));
  json j;
  in >> j;
  CHECK(j["scenario"] == "disk_winding_d2");
  CHECK(j["checks"].size() == 3);
}

TEST_CASE("cli: unknown scenario exits 2 after listing what exists") {
  CHECK(run_cli_args({"verify", "--scenario", "does_not_exist"}) == 2);
  CHECK(run_cli_args({"bogus_subcommand"}) == 2);
}

TEST_CASE("cli: sweep emits the convergence table") {
  std::string out = "/tmp/transgress_test_sweep.csv";
  std::remove(out.c_str());
  CHECK(run_cli_args({"sweep", "--scenario", "fiber_sphere", "--orders", "4,8", "--out", out}) ==
        0);
  std::ifstream in(out);
  REQUIRE(static_cast<bool>(in));
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "order,value,error_estimate");
  CHECK(row1.substr(0, 2) == "4,");
  CHECK(row2.substr(0, 2) == "8,");
}

TEST_CASE("cli: an external scenario file is honored") {
  std::string path = "/tmp/transgress_test_scenario.json";
  {
    std::ofstream f(path);
    f << R"({
      "name": "external_fiber",
      "kind": "fiber_normalization",
      "extra": {"n": 1},
      "expected": [
        {"id": "fiber_integral", "value": 1.0, "provenance": "closed-form", "tol": 1e-8}
      ]
    })";
  }
  CHECK(run_cli_args({"verify", "--scenario-file", path}) == 0);
}

TEST_CASE("cli: a failing expectation exits 1") {
  std::string path = "/tmp/transgress_test_bad_scenario.json";
  {
    std::ofstream f(path);
    f << R"({
      "name": "external_bad",
      "kind": "fiber_normalization",
      "extra": {"n": 1},
      "expected": [
        {"id": "fiber_integral", "value": 2.0, "provenance": "closed-form", "tol": 1e-8}
      ]
    })";
  }
  CHECK(run_cli_args({"verify", "--scenario-file", path}) == 1);
}

TEST_CASE("an inward field gives the infinity-section") {
  GeomConfig gc;
  FramedGeometry sphere = builtin_geometry("sphere_round", std::vector<double>{1.0}, gc);
  StabilizedGeometry stab = stabilize(std::move(sphere));
  AmbientField inward = build_field(json{{"kind", "polynomial"},
                                         {"components",
                                          {json::array({{{"c", -1.0}, {"powers", {1, 0, 0}}}}),
                                           json::array({{{"c", -1.0}, {"powers", {0, 1, 0}}}}),
                                           json::array({{{"c", -1.0}, {"powers", {0, 0, 1}}}})}}},
                                    3);
  std::vector<BoundaryField> bfs;
  for (const GeometryChart& ch : stab.base.charts)
    bfs.push_back(boundary_field_from_ambient(ch, 2, inward.value));
  BundleSection sec = section_from_vector_field(stab, bfs);
  Vec u = sec.u[1].value(Point{1.2, 0.4});
  CHECK(u[0] == doctest::Approx(-1.0));
  CHECK(std::abs(u[1]) < 1e-12);
}

TEST_CASE("scenario parity must match the geometry") {
  Scenario s = find_scenario("disk_winding_d1");
  s.parity = "even";  // circle boundary is odd-dimensional fibre
  CHECK_THROWS_AS(run_scenario(s, {}), std::invalid_argument);
}

TEST_CASE("scenario-level parallelism does not change the aggregate report") {
  auto run_all_to = [](const char* path, const char* threads) {
    if (threads)
      setenv("TRANSGRESS_THREADS", threads, 1);
    else
      unsetenv("TRANSGRESS_THREADS");
    REQUIRE(run_cli_args({"all", "--out", path}) == 0);
  };
  run_all_to("/tmp/transgress_all_t1.json", nullptr);
  run_all_to("/tmp/transgress_all_t2.json", "2");
  unsetenv("TRANSGRESS_THREADS");
  auto load = [](const char* path) {
    std::ifstream in(path);
    json j;
    in >> j;
    return strip_timestamps(j);
  };
  CHECK(load("/tmp/transgress_all_t1.json").dump() == load("/tmp/transgress_all_t2.json").dump());
}

TEST_CASE("field jacobians agree with central differences at generic points") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> unit(-0.8, 0.8);
  const double h = 1e-6;
  std::vector<json> specs{
      json{{"kind", "complex_power"}, {"power", 3}},
      json{{"kind", "complex_power"}, {"power", -2}},
      json{{"kind", "polynomial"},
           {"components",
            {json::array({{{"c", 1.0}, {"powers", {2, 1}}}, {{"c", -0.5}, {"powers", {0, 0}}}}),
             json::array({{{"c", 2.0}, {"powers", {0, 3}}}, {{"c", 1.0}, {"powers", {1, 0}}}})}}}};
  for (const json& spec : specs) {
    CAPTURE(spec.dump());
    AmbientField f = build_field(spec, 2);
    for (int t = 0; t < 5; ++t) {
      Vec p{unit(rng), unit(rng)};
      Mat J = f.jacobian(p);
      for (int a = 0; a < 2; ++a) {
        Vec pp = p, pm = p;
        pp[a] += h;
        pm[a] -= h;
        Vec vp = f.value(pp), vm = f.value(pm);
        for (int i = 0; i < 2; ++i)
          CHECK(J(i, a) == doctest::Approx((vp[i] - vm[i]) / (2.0 * h)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("integer pairings are radius independent") {
  GeomConfig gc;
  FramedGeometry big = builtin_geometry("sphere_round", std::vector<double>{2.0}, gc);
  StabilizedGeometry stab = stabilize(std::move(big));
  QuadratureSpec spec;
  {
    BundleSection sec = constant_section(stab, 1.0);
    IntegralResult r = integrate_over_atlas(section_psi_pullback(sec), stab.base, spec, 1e-5);
    CHECK(std::abs(r.value - 1.0) < 1e-6);
  }
  {
    BundleSection sec = constant_section(stab, -1.0);
    IntegralResult r = integrate_over_atlas(section_psi_pullback(sec), stab.base, spec, 1e-5);
    CHECK(std::abs(r.value + 1.0) < 1e-6);
  }
}
