#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "transgress/geometry.hpp"
#include "transgress/quadrature.hpp"

using namespace transgress;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss-legendre is exact for polynomials of degree 2N-1") {
  ChartDomain dom(1, {{-1.0, 1.0}});
  // degree 7 polynomial with known integral over [-1, 1]
  KForm f = KForm::from_coefficients(dom, 1, {{{1}, [](const Point& p) {
                                                 double x = p[0];
                                                 return 3.0 * std::pow(x, 7) - x * x * x +
                                                        2.0 * x * x + 0.5;
                                               }}});
  QuadratureSpec spec;
  spec.order = 4;  // exact through degree 7
  IntegralResult r = integrate(f, dom, spec);
  CHECK(r.value == doctest::Approx(2.0 / 3.0 * 2.0 + 1.0).epsilon(1e-14));
}

TEST_CASE("trapezoid on a periodic axis integrates dtheta/(2 pi) to 1") {
  ChartDomain circle(1, {{0.0, 2.0 * kPi}}, {true});
  KForm f = KForm::from_coefficients(circle, 1,
                                     {{{1}, [](const Point&) { return 1.0 / (2.0 * kPi); }}});
  IntegralResult r = integrate(f, circle, {});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("round sphere area comes out as 4 pi over the two-chart atlas") {
  GeomConfig cfg;
  FramedGeometry sphere = builtin_geometry("sphere_round", std::vector<double>{1.0}, cfg);
  std::vector<KForm> area;
  for (const GeometryChart& ch : sphere.charts) {
    MatrixField metric = ch.metric;
    area.push_back(KForm::from_coefficients(
        ch.domain, 2, {{{1, 2}, [metric](const Point& p) { return std::sqrt(metric(p).det()); }}}));
  }
  QuadratureSpec spec;
  spec.order = 32;
  IntegralResult r = integrate_over_atlas(area, sphere, spec, 1e-5);
  CHECK(std::abs(r.value - 4.0 * kPi) < 1e-8);
  CHECK(r.error_estimate < 1e-6);
}

TEST_CASE("flat torus area scales as (2 pi)^2 r1 r2") {
  GeomConfig cfg;
  FramedGeometry torus = builtin_geometry("torus_flat", std::vector<double>{1.5, 0.75}, cfg);
  const GeometryChart& ch = torus.charts[0];
  MatrixField metric = ch.metric;
  std::vector<KForm> area{KForm::from_coefficients(
      ch.domain, 2, {{{1, 2}, [metric](const Point& p) { return std::sqrt(metric(p).det()); }}})};
  IntegralResult r = integrate_over_atlas(area, torus, {}, 1e-5);
  CHECK(r.value == doctest::Approx(4.0 * kPi * kPi * 1.5 * 0.75).epsilon(1e-12));
}

TEST_CASE("circle length is 2 pi") {
  GeomConfig cfg;
  FramedGeometry circle = builtin_geometry("circle_flat", {}, cfg);
  std::vector<KForm> len{
      KForm::from_coefficients(circle.charts[0].domain, 1, {{{1}, [](const Point&) { return 1.0; }}})};
  IntegralResult r = integrate_over_atlas(len, circle, {}, 1e-5);
  CHECK(r.value == doctest::Approx(2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("degree mismatch is rejected") {
  ChartDomain dom(2, {{0.0, 1.0}, {0.0, 1.0}});
  KForm one_form = KForm::from_coefficients(dom, 1, {{{1}, [](const Point&) { return 1.0; }}});
  CHECK_THROWS_AS(integrate(one_form, dom, {}), std::invalid_argument);
}

TEST_CASE("halving the cell size cuts the error estimate at least 4x") {
  ChartDomain dom(1, {{0.0, 1.0}});
  KForm f = KForm::from_coefficients(
      dom, 1, {{{1}, [](const Point& p) { return std::exp(p[0]) * std::cos(3.0 * p[0]); }}});
  QuadratureSpec coarse;
  coarse.order = 2;
  coarse.subdivision = 2;
  QuadratureSpec fine = coarse;
  fine.subdivision = 4;
  IntegralResult rc = integrate(f, dom, coarse);
  IntegralResult rf = integrate(f, dom, fine);
  CHECK(rf.error_estimate * 4.0 <= rc.error_estimate * 1.0001);
}

TEST_CASE("reversing one axis flips the sign of the integral") {
  ChartDomain dom(2, {{0.0, 1.0}, {0.0, 1.0}});
  KForm f = KForm::from_coefficients(
      dom, 2, {{{1, 2}, [](const Point& p) { return std::sin(p[0] + 0.3) + p[1] * p[1]; }}});
  SmoothMap flip;
  flip.source = dom;
  flip.target_dim = 2;
  flip.value = [](const Point& p) { return Vec{1.0 - p[0], p[1]}; };
  flip.jacobian_analytic = [](const Point&) {
    Mat J(2, 2);
    J(0, 0) = -1.0;
    J(1, 1) = 1.0;
    return J;
  };
  IntegralResult straight = integrate(f, dom, {});
  IntegralResult flipped = integrate(pullback(f, flip), dom, {});
  CHECK(flipped.value == doctest::Approx(-straight.value).epsilon(1e-13));
}

TEST_CASE("overlapping ranges in a shared coordinate space are rejected") {
  ChartDomain dom(1, {{0.0, 1.0}});
  KForm f = KForm::from_coefficients(dom, 1, {{{1}, [](const Point&) { return 1.0; }}});
  AtlasPiece a, b;
  a.form = f;
  a.range[0] = {0.0, 0.6};
  a.space = 7;
  b.form = f;
  b.range[0] = {0.5, 1.0};
  b.space = 7;
  std::vector<AtlasPiece> pieces{a, b};
  CHECK_THROWS_WITH_AS(integrate_atlas(pieces, {}, 1e-5).value,
                       "overlapping chart integration ranges", std::invalid_argument);
  // disjoint split over the same space is fine
  pieces[1].range[0] = {0.6, 1.0};
  CHECK(integrate_atlas(pieces, {}, 1e-5).value == doctest::Approx(1.0));
}

TEST_CASE("boundary integral of a constant form over a cube vanishes") {
  ChartDomain cube(3, {{0.0, 0.5}, {0.0, 0.5}, {0.0, 0.5}});
  KForm f = KForm::from_coefficients(cube, 2, {{{1, 2}, [](const Point&) { return 2.0; }},
                                               {{1, 3}, [](const Point&) { return -1.0; }},
                                               {{2, 3}, [](const Point&) { return 0.7; }}});
  QuadratureSpec spec;
  spec.order = 6;
  IntegralResult r = boundary_integral(f, spec);
  CHECK(std::abs(r.value) < 1e-14);
}

TEST_CASE("1-cube boundary telescopes a 0-form") {
  ChartDomain seg(1, {{0.2, 1.4}});
  KForm f = KForm::from_coefficients(seg, 0, {{{}, [](const Point& p) { return p[0] * p[0]; }}});
  IntegralResult r = boundary_integral(f, {});
  CHECK(r.value == doctest::Approx(1.4 * 1.4 - 0.2 * 0.2));
}

TEST_CASE("boundary integral agrees with the interior integral of d (Stokes)") {
  ChartDomain cube(2, {{0.1, 0.6}, {-0.2, 0.4}});
  KForm f = KForm::from_coefficients(
      cube, 1, {{{1}, [](const Point& p) { return std::sin(p[1]) + p[0]; }},
                {{2}, [](const Point& p) { return std::cos(p[0] * p[1]); }}});
  QuadratureSpec spec;
  spec.order = 16;
  IntegralResult lhs = boundary_integral(f, spec);
  IntegralResult rhs = integrate(exterior_derivative(f), cube, spec);
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-9));
}
