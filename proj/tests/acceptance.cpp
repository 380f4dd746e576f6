// Acceptance suite: end-to-end identities at fixed tolerances, one summary
// line per criterion. Run through ctest or directly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "oracles.hpp"
#include "transgress/verify.hpp"

using namespace transgress;
using namespace transgress::testing;

namespace {

struct Criterion {
  int id;
  bool ok = true;
  std::string detail;

  explicit Criterion(int id_) : id(id_) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  ~Criterion() {
    std::printf("criterion %2d: %s%s%s\n", id, ok ? "PASS" : "FAIL", detail.empty() ? "" : " — ",
                detail.c_str());
    std::fflush(stdout);
  }
};

const CheckRecord& check_of(const Report& r, const std::string& id) {
  for (const CheckRecord& c : r.checks)
    if (c.check_id == id) return c;
  throw std::runtime_error("report has no check " + id);
}

double run_seconds(const Scenario& s, const RunConfig& cfg, Report& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = run_scenario(s, cfg);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

TEST_CASE("criterion 1: fiber integrals are 1 for n = 1, 2, 3") {
  Criterion cr{1};
  RunConfig cfg;
  for (const char* name : {"fiber_circle", "fiber_sphere", "fiber_threesphere"}) {
    Report r;
    double secs = run_seconds(find_scenario(name), cfg, r);
    const CheckRecord& c = check_of(r, "fiber_integral");
    cr.require(std::abs(c.lhs - 1.0) < 1e-8, std::string(name) + " off by more than 1e-8");
    cr.require(secs < 5.0, std::string(name) + " exceeded 5 s");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 2: disk winding family satisfies the odd-parity identity") {
  Criterion cr{2};
  RunConfig cfg;
  for (int d = -2; d <= 3; ++d) {
    std::string name = "disk_winding_d" + std::string(d < 0 ? "m" : "") + std::to_string(std::abs(d));
    Report r = run_scenario(find_scenario(name), cfg);
    const CheckRecord& sum = check_of(r, "sum_indices");
    const CheckRecord& integral = check_of(r, "alpha_psi_integral");
    const CheckRecord& identity = check_of(r, "index_identity");

    // left side independently: winding of the extension around its zero
    int oracle = d == 0 ? 0 : winding_oracle(complex_power_fn(d), {0.0, 0.0}, 0.5);
    cr.require(oracle == d, name + ": oracle disagrees with d");
    cr.require(static_cast<int>(std::lround(sum.lhs)) == oracle,
               name + ": index sum disagrees with the winding oracle");
    cr.require(std::abs(integral.lhs - (d - 1)) < 1e-6, name + ": integral not integer-resolved");
    cr.require(identity.pass && sum.pass && integral.pass, name + ": report check failed");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 3: ball scenarios satisfy the even-parity identity") {
  Criterion cr{3};
  RunConfig cfg;
  struct Case {
    const char* name;
    double sum;
  };
  for (Case c : {Case{"ball_shift_centered", 1.0}, Case{"ball_shift_offset", 1.0},
                 Case{"ball_saddle", 0.0}}) {
    Report r = run_scenario(find_scenario(c.name), cfg);
    const CheckRecord& sum = check_of(r, "sum_indices");
    const CheckRecord& identity = check_of(r, "index_identity");
    cr.require(sum.lhs == c.sum, std::string(c.name) + ": wrong index sum");
    cr.require(std::abs(identity.lhs) < 1e-6, std::string(c.name) + ": identity residual > 1e-6");
    cr.require(r.all_pass(), std::string(c.name) + ": report check failed");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 4: transversal and tangent boundary fields, pointwise") {
  Criterion cr{4};
  RunConfig cfg;
  struct Case {
    const char* name;
    double bound;
  };
  for (Case c : {Case{"pointwise_outward_sphere", 1e-8}, Case{"pointwise_outward_circle", 1e-8},
                 Case{"pointwise_tangent_circle", 1e-8}, Case{"pointwise_tangent_torus", 1e-8}}) {
    Report r = run_scenario(find_scenario(c.name), cfg);
    const CheckRecord& dev = check_of(r, "max_pointwise_deviation");
    cr.require(dev.lhs < c.bound, std::string(c.name) + ": deviation above bound");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 5: section pairings over the compactified bundles") {
  Criterion cr{5};
  RunConfig cfg;
  struct Case {
    const char* name;
    double value;
  };
  for (Case c : {Case{"infty_section_sphere", -1.0}, Case{"zero_section_sphere", 1.0},
                 Case{"infty_section_trivial", 0.0}}) {
    Report r = run_scenario(find_scenario(c.name), cfg);
    const CheckRecord& v = check_of(r, "section_integral");
    cr.require(std::abs(v.lhs - c.value) < 1e-6, std::string(c.name) + ": integral off");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 6: thom-class shadow combination") {
  Criterion cr{6};
  RunConfig cfg;
  for (const char* name : {"thom_shadow_sphere", "thom_shadow_trivial"}) {
    Report r = run_scenario(find_scenario(name), cfg);
    cr.require(std::abs(check_of(r, "infinity_combination").lhs) < 1e-6,
               std::string(name) + ": infinity pairing not 0");
    cr.require(std::abs(check_of(r, "fiber_combination").lhs - 1.0) < 1e-6,
               std::string(name) + ": fiber pairing not 1");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 7: closedness and transgression over random cubes") {
  Criterion cr{7};
  RunConfig cfg;
  int cube_total = 0;
  for (const char* name : {"stokes_cubes_n1", "stokes_cubes_n2", "stokes_cubes_n3"}) {
    const Scenario& s = find_scenario(name);
    cube_total += s.extra.at("cubes").get<int>();
    Report r = run_scenario(s, cfg);
    cr.require(check_of(r, "max_boundary_ratio").lhs < 1e-5,
               std::string(name) + ": boundary mass above 1e-5 x scale^(n+1)");
  }
  cr.require(cube_total == 100, "cube census is not 100");
  for (const char* name : {"transgression_cubes_n1", "transgression_cubes_n3"}) {
    Report r = run_scenario(find_scenario(name), cfg);
    cr.require(check_of(r, "max_residual_ratio").lhs < 1.0,
               std::string(name) + ": residual above the combined estimate");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 8: gauss-bonnet regression over the builtin surfaces") {
  Criterion cr{8};
  RunConfig cfg;
  struct Case {
    const char* name;
    double value;
  };
  for (Case c : {Case{"gauss_bonnet_sphere", 2.0}, Case{"gauss_bonnet_ellipsoid", 2.0},
                 Case{"gauss_bonnet_torus", 0.0}}) {
    Report r = run_scenario(find_scenario(c.name), cfg);
    cr.require(std::abs(check_of(r, "euler_integral").lhs - c.value) < 1e-6,
               std::string(c.name) + ": curvature integral off");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 9: pointwise frame equivariance") {
  Criterion cr{9};
  RunConfig cfg;
  {
    Report r = run_scenario(find_scenario("frame_equivariance_flat"), cfg);
    cr.require(check_of(r, "max_frame_deviation").lhs < 1e-9, "flat deviation above 1e-9");
  }
  {
    Report r = run_scenario(find_scenario("frame_equivariance_curved"), cfg);
    cr.require(check_of(r, "max_frame_deviation").lhs < 1e-6,
               "difference-connection deviation above 1e-6");
  }
  CHECK(cr.ok);
}

TEST_CASE("criterion 10: the pairings survive a change of metric") {
  Criterion cr{10};
  RunConfig cfg;
  Report r = run_scenario(find_scenario("ellipsoid_sections"), cfg);
  cr.require(std::abs(check_of(r, "fiber_integral").lhs - 1.0) < 1e-5, "fiber pairing off");
  cr.require(std::abs(check_of(r, "zero_section_integral").lhs - 1.0) < 1e-5,
             "0-section pairing off");
  cr.require(std::abs(check_of(r, "infinity_section_integral").lhs + 1.0) < 1e-5,
             "infinity-section pairing off");
  CHECK(cr.ok);
}

TEST_CASE("criterion 11: the full suite finishes quickly and exits 0") {
  Criterion cr{11};
#ifdef TRANSGRESS_CLI_PATH
  std::string cmd = std::string("TRANSGRESS_THREADS=1 ") + TRANSGRESS_CLI_PATH +
                    " all > /dev/null 2>&1";
  auto t0 = std::chrono::steady_clock::now();
  int rc = std::system(cmd.c_str());
  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();
  cr.require(rc == 0, "nonzero exit status");
  cr.require(secs < 300.0, "exceeded the five-minute budget");
  cr.detail = "wall " + std::to_string(secs).substr(0, 5) + " s" +
              (cr.detail.empty() ? "" : "; " + cr.detail);
#else
  cr.require(false, "CLI path not wired into the build");
#endif
  CHECK(cr.ok);
}
