#include "transgress/indices.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace transgress {

namespace {
constexpr double kPi = std::numbers::pi;

Vec unit_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  double r = 0.0;
  while (r < 1e-8) {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    r = v.norm();
  }
  return v.normalized();
}

void check_punctured_ball(const IsolatedZero& z, const VectorField& field, int dim) {
  std::mt19937_64 rng(0xBA11u);
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    for (int s = 0; s < 64; ++s) {
      Vec dir = unit_direction(dim, rng);
      Vec p = z.location + dir * (frac * z.isolation_radius);
      if (field(p).norm() <= 1e-8)
        throw std::invalid_argument("field vanishes inside an isolation ball");
    }
  }
}

}  // namespace

int index_nondegenerate(const IsolatedZero& zero) {
  if (!zero.jacobian) throw std::invalid_argument("no Jacobian declared; use degree integral");
  double det = (*zero.jacobian)(zero.location).det();
  if (std::abs(det) <= 1e-8) throw std::invalid_argument("use degree integral");
  return det > 0.0 ? 1 : -1;
}

int index_by_degree(const VectorField& field, const Vec& center, double radius, int dim,
                    const QuadratureSpec& spec) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("index_by_degree supports dim in {2, 3}");
  if (!(radius > 0.0)) throw std::invalid_argument("degree sphere radius must be positive");

  // normalized field on the sphere around the zero
  SphereBundleMap map;
  if (dim == 2) {
    ChartDomain dom(1, {{0.0, 2.0 * kPi}}, {true});
    map.u.source = dom;
    map.u.target_dim = 2;
    map.u.value = [field, center, radius](const Point& p) {
      Vec x = center + Vec{std::cos(p[0]), std::sin(p[0])} * radius;
      return field(x).normalized();
    };
    map.conn = ConnectionForms::flat(2, dom);
  } else {
    ChartDomain dom(2, {{0.0, kPi}, {0.0, 2.0 * kPi}}, {false, true});
    map.u.source = dom;
    map.u.target_dim = 3;
    map.u.value = [field, center, radius](const Point& p) {
      double st = std::sin(p[0]);
      Vec x = center + Vec{st * std::cos(p[1]), st * std::sin(p[1]), std::cos(p[0])} * radius;
      return field(x).normalized();
    };
    map.conn = ConnectionForms::flat(3, dom);
  }

  {
    std::mt19937_64 rng(0xDE9EEu);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 500; ++s) {
      Point p(map.u.source.dim());
      for (int a = 0; a < map.u.source.dim(); ++a) {
        const Interval& b = map.u.source.bounds(a);
        p[a] = b.lo + unit(rng) * b.length();
      }
      // re-evaluate through the raw field to check the precondition
      Vec dir(dim);
      if (dim == 2) {
        dir = Vec{std::cos(p[0]), std::sin(p[0])};
      } else {
        double st = std::sin(p[0]);
        dir = Vec{st * std::cos(p[1]), st * std::sin(p[1]), std::cos(p[0])};
      }
      Vec x = center + dir * radius;
      if (field(x).norm() <= 1e-8)
        throw std::invalid_argument("field vanishes on the degree sphere");
    }
  }

  KForm form = psi_form(map);
  IntegralResult r = integrate(form, map.u.source, spec);
  double rounded = std::round(r.value);
  if (std::abs(r.value - rounded) >= 1e-3)
    throw std::runtime_error("degree not resolved; refine quadrature");
  return static_cast<int>(rounded);
}

int sum_indices(std::span<const IsolatedZero> zeros, const VectorField& field, int dim,
                double domain_radius, const QuadratureSpec& spec) {
  for (size_t i = 0; i < zeros.size(); ++i) {
    const IsolatedZero& zi = zeros[i];
    if (!(zi.isolation_radius > 0.0))
      throw std::invalid_argument("isolation radius must be positive");
    if (zi.location.norm() + zi.isolation_radius >= domain_radius)
      throw std::invalid_argument("isolation ball is not interior to the domain");
    for (size_t j = i + 1; j < zeros.size(); ++j) {
      double dist = (zi.location - zeros[j].location).norm();
      if (dist <= zi.isolation_radius + zeros[j].isolation_radius)
        throw std::invalid_argument("overlapping isolation balls");
    }
    check_punctured_ball(zi, field, dim);
  }

  int total = 0;
  for (const IsolatedZero& z : zeros) {
    bool nondegenerate = false;
    if (z.jacobian) {
      double det = (*z.jacobian)(z.location).det();
      nondegenerate = std::abs(det) > 1e-8;
    }
    total += nondegenerate ? index_nondegenerate(z)
                           : index_by_degree(field, z.location, z.isolation_radius, dim, spec);
  }
  return total;
}

}  // namespace transgress
