#include "transgress/transgression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace transgress {

namespace {
constexpr double kPi = std::numbers::pi;
}

long long double_factorial(int k) {
  if (k < -1) throw std::invalid_argument("double factorial of k < -1");
  long long r = 1;
  for (int v = k; v > 1; v -= 2) r *= v;
  return r;
}

double sphere_volume(int n) {
  if (n < 1) throw std::invalid_argument("sphere_volume requires n >= 1");
  const int m = n / 2;
  if (n % 2 == 0) return 2.0 * std::pow(2.0 * kPi, m) / static_cast<double>(double_factorial(n - 1));
  return std::pow(2.0 * kPi, m + 1) / static_cast<double>(double_factorial(n - 1));
}

// ---------------------------------------------------------------------------
// Permutation tables
// ---------------------------------------------------------------------------

namespace {

struct PsiTerm {
  int8_t sign;
  uint8_t u_idx;
  std::array<uint8_t, 4> theta_idx;  // n - 2j entries
  std::array<std::array<uint8_t, 2>, 2> omega_pairs;  // j entries
};

int permutation_sign(std::span<const uint8_t> perm) {
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

const std::vector<PsiTerm>& psi_terms(int n, int j) {
  static std::map<std::pair<int, int>, std::vector<PsiTerm>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, j);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int n_theta = n - 2 * j;
  if (n < 1 || n > 4 || j > 2 || n_theta > 4)
    throw std::invalid_argument("psi terms are tabulated for n <= 4");
  std::vector<uint8_t> perm(static_cast<size_t>(n + 1));
  std::iota(perm.begin(), perm.end(), static_cast<uint8_t>(0));
  std::vector<PsiTerm> terms;
  do {
    PsiTerm t{};
    t.sign = static_cast<int8_t>(permutation_sign(perm));
    t.u_idx = perm[0];
    for (int k = 0; k < n_theta; ++k) t.theta_idx[static_cast<size_t>(k)] = perm[static_cast<size_t>(1 + k)];
    for (int k = 0; k < j; ++k) {
      t.omega_pairs[static_cast<size_t>(k)][0] = perm[static_cast<size_t>(1 + n_theta + 2 * k)];
      t.omega_pairs[static_cast<size_t>(k)][1] = perm[static_cast<size_t>(2 + n_theta + 2 * k)];
    }
    terms.push_back(t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(key, std::move(terms)).first->second;
}

struct PfTerm {
  int8_t sign;
  std::array<std::array<uint8_t, 2>, 2> pairs;  // rank/2 entries
};

const std::vector<PfTerm>& pfaffian_terms(int rank) {
  static std::map<int, std::vector<PfTerm>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(rank);
  if (it != cache.end()) return it->second;
  if (rank < 2 || rank > 4) throw std::invalid_argument("pairing terms are tabulated for rank <= 4");

  std::vector<uint8_t> perm(static_cast<size_t>(rank));
  std::iota(perm.begin(), perm.end(), static_cast<uint8_t>(0));
  std::vector<PfTerm> terms;
  do {
    PfTerm t{};
    t.sign = static_cast<int8_t>(permutation_sign(perm));
    for (int k = 0; k < rank / 2; ++k) {
      t.pairs[static_cast<size_t>(k)][0] = perm[static_cast<size_t>(2 * k)];
      t.pairs[static_cast<size_t>(k)][1] = perm[static_cast<size_t>(2 * k + 1)];
    }
    terms.push_back(t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(rank, std::move(terms)).first->second;
}

// 1 / ((n-1)!! c_n 2^j j! (n-2j)!!), the integer part exact.
double psi_weight(int n, int j) {
  const int m = n / 2;
  // (n-1)!! c_n collapses to 2 (2 pi)^m for even n, (2 pi)^{m+1} for odd
  double head = (n % 2 == 0) ? 2.0 * std::pow(2.0 * kPi, m) : std::pow(2.0 * kPi, m + 1);
  long long denom = 1;
  for (int k = 0; k < j; ++k) denom *= 2;
  for (int k = 2; k <= j; ++k) denom *= k;
  denom *= double_factorial(n - 2 * j);
  return 1.0 / (head * static_cast<double>(denom));
}

}  // namespace

// ---------------------------------------------------------------------------
// Pointwise assembly
// ---------------------------------------------------------------------------

std::vector<FormValue> theta_value(const Vec& u, std::span<const FormValue> du,
                                   const FormMatrix& omega) {
  const int rank = u.size();
  std::vector<FormValue> th(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    FormValue t = du[static_cast<size_t>(i)];
    for (int j = 0; j < rank; ++j) t += u[j] * omega(i, j);
    th[static_cast<size_t>(i)] = t;
  }
  return th;
}

FormValue psi_j_value(int n, int j, const Vec& u, std::span<const FormValue> theta,
                      const FormMatrix& curvature) {
  const int m = n / 2;
  if (j < 0 || j > m) throw std::invalid_argument("psi_j: j out of range");
  const int dim = theta.empty() ? curvature.dim : theta[0].dim;
  FormValue acc(dim, n);
  const int n_theta = n - 2 * j;
  for (const PsiTerm& t : psi_terms(n, j)) {
    double scale = t.sign * u[t.u_idx];
    if (scale == 0.0) continue;
    FormValue prod(dim, 0);
    prod[0] = scale;
    for (int k = 0; k < n_theta; ++k)
      prod = wedge(prod, theta[t.theta_idx[static_cast<size_t>(k)]]);
    for (int k = 0; k < j; ++k)
      prod = wedge(prod, curvature(t.omega_pairs[static_cast<size_t>(k)][0],
                                   t.omega_pairs[static_cast<size_t>(k)][1]));
    acc += prod;
  }
  return acc;
}

FormValue psi_value(int n, const Vec& u, std::span<const FormValue> theta,
                    const FormMatrix& curvature) {
  const int m = n / 2;
  const int dim = theta.empty() ? curvature.dim : theta[0].dim;
  FormValue acc(dim, n);
  for (int j = 0; j <= m; ++j) acc += psi_weight(n, j) * psi_j_value(n, j, u, theta, curvature);
  return acc;
}

FormValue euler_value(const FormMatrix& curvature) {
  const int rank = curvature.rank;
  if (rank % 2 != 0) throw std::invalid_argument("Euler form requires even rank");
  const int dim = curvature.dim;
  FormValue acc(dim, rank);
  if (rank > dim) return acc;
  for (const PfTerm& t : pfaffian_terms(rank)) {
    FormValue prod = curvature(t.pairs[0][0], t.pairs[0][1]);
    for (int k = 1; k < rank / 2; ++k)
      prod = wedge(prod, curvature(t.pairs[static_cast<size_t>(k)][0],
                                   t.pairs[static_cast<size_t>(k)][1]));
    acc += static_cast<double>(t.sign) * prod;
  }
  double norm = std::pow(4.0 * kPi, rank / 2);
  for (int k = 2; k <= rank / 2; ++k) norm *= k;
  return (1.0 / norm) * acc;
}

// ---------------------------------------------------------------------------
// Connection data on charts
// ---------------------------------------------------------------------------

ConnectionForms ConnectionForms::flat(int rank, const ChartDomain& chart) {
  ConnectionForms c;
  c.rank = rank;
  c.chart = chart;
  const int d = chart.dim();
  c.omega = [rank, d](const Point&) { return FormMatrix(rank, d, 1); };
  c.curvature = [rank, d](const Point&) { return FormMatrix(rank, d, 2); };
  return c;
}

ConnectionForms ConnectionForms::on_chart(const StabilizedGeometry& geom, int chart_idx) {
  ConnectionForms c;
  c.rank = geom.rank();
  c.chart = geom.base.charts[static_cast<size_t>(chart_idx)].domain;
  // geometry outlives the evaluators in harness flows; copy the pieces we need
  const GeometryChart& ch = geom.base.charts[static_cast<size_t>(chart_idx)];
  FormMatrixField base_omega = ch.omega;
  FormMatrixField base_curv = ch.curvature;
  const int n = geom.base.n;
  const int d = c.chart.dim();
  c.omega = [base_omega, n, d](const Point& p) {
    FormMatrix w = base_omega(p);
    FormMatrix out(n + 1, d, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i + 1, j + 1) = w(i, j);
    return out;
  };
  c.curvature = [base_curv, n, d](const Point& p) {
    FormMatrix W = base_curv(p);
    FormMatrix out(n + 1, d, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i + 1, j + 1) = W(i, j);
    return out;
  };
  return c;
}

ConnectionForms ConnectionForms::pulled_back(const SmoothMap& base_map) const {
  if (base_map.target_dim != chart.dim())
    throw std::invalid_argument("connection pullback: base map target dimension mismatch");
  ConnectionForms out;
  out.rank = rank;
  out.chart = base_map.source;
  const int sd = base_map.source.dim();
  const int r = rank;
  FormMatrixField om = omega, cu = curvature;
  SmoothMap f = base_map;
  auto pull = [f, sd, r](const FormMatrixField& field, int degree) -> FormMatrixField {
    return [f, sd, r, field, degree](const Point& p) {
      Vec q = f(p);
      Point pq(f.target_dim);
      for (int i = 0; i < f.target_dim; ++i) pq[i] = q[i];
      Mat J = f.jacobian(p);
      FormMatrix w = field(pq);
      FormMatrix o(r, sd, degree);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) o(i, j) = pullback_value(w(i, j), J, sd);
      return o;
    };
  };
  out.omega = pull(om, 1);
  out.curvature = pull(cu, 2);
  return out;
}

// ---------------------------------------------------------------------------
// Fibre inclusions
// ---------------------------------------------------------------------------

SphereBundleMap fiber_inclusion(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("fiber_inclusion supports n in {1,2,3}");
  SphereBundleMap map;
  if (n == 1) {
    ChartDomain dom(1, {{0.0, 2.0 * kPi}}, {true});
    map.u.source = dom;
    map.u.target_dim = 2;
    map.u.value = [](const Point& p) { return Vec{std::cos(p[0]), std::sin(p[0])}; };
    map.u.jacobian_analytic = [](const Point& p) {
      Mat J(2, 1);
      J(0, 0) = -std::sin(p[0]);
      J(1, 0) = std::cos(p[0]);
      return J;
    };
    map.conn = ConnectionForms::flat(2, dom);
  } else if (n == 2) {
    ChartDomain dom(2, {{0.0, kPi}, {0.0, 2.0 * kPi}}, {false, true});
    map.u.source = dom;
    map.u.target_dim = 3;
    map.u.value = [](const Point& p) {
      double st = std::sin(p[0]), ct = std::cos(p[0]);
      return Vec{ct, st * std::cos(p[1]), st * std::sin(p[1])};
    };
    map.u.jacobian_analytic = [](const Point& p) {
      double st = std::sin(p[0]), ct = std::cos(p[0]);
      double cf = std::cos(p[1]), sf = std::sin(p[1]);
      Mat J(3, 2);
      J(0, 0) = -st;
      J(1, 0) = ct * cf;
      J(1, 1) = -st * sf;
      J(2, 0) = ct * sf;
      J(2, 1) = st * cf;
      return J;
    };
    map.conn = ConnectionForms::flat(3, dom);
  } else {
    ChartDomain dom(3, {{0.0, kPi}, {0.0, kPi}, {0.0, 2.0 * kPi}}, {false, false, true});
    map.u.source = dom;
    map.u.target_dim = 4;
    map.u.value = [](const Point& p) {
      double s1 = std::sin(p[0]), c1 = std::cos(p[0]);
      double s2 = std::sin(p[1]), c2 = std::cos(p[1]);
      return Vec{c1, s1 * c2, s1 * s2 * std::cos(p[2]), s1 * s2 * std::sin(p[2])};
    };
    map.u.jacobian_analytic = [](const Point& p) {
      double s1 = std::sin(p[0]), c1 = std::cos(p[0]);
      double s2 = std::sin(p[1]), c2 = std::cos(p[1]);
      double cf = std::cos(p[2]), sf = std::sin(p[2]);
      Mat J(4, 3);
      J(0, 0) = -s1;
      J(1, 0) = c1 * c2;
      J(1, 1) = -s1 * s2;
      J(2, 0) = c1 * s2 * cf;
      J(2, 1) = s1 * c2 * cf;
      J(2, 2) = -s1 * s2 * sf;
      J(3, 0) = c1 * s2 * sf;
      J(3, 1) = s1 * c2 * sf;
      J(3, 2) = s1 * s2 * cf;
      return J;
    };
    map.conn = ConnectionForms::flat(4, dom);
  }
  return map;
}

// ---------------------------------------------------------------------------
// Form-level operations
// ---------------------------------------------------------------------------

namespace {

struct MapData {
  SmoothMap u;
  ConnectionForms conn;
  int rank, dim;
};

Vec unit_u_at(const SmoothMap& u, const Point& p) {
  Vec v = u(p);
  double r = v.norm();
  if (std::abs(r - 1.0) > 1e-9)
    throw std::invalid_argument("sphere bundle map is not unit norm at a sampled point");
  return v;
}

std::vector<FormValue> du_values(const MapData& d, const Point& p) {
  Mat J = d.u.jacobian(p);
  std::vector<FormValue> du(static_cast<size_t>(d.rank), FormValue(d.dim, 1));
  for (int i = 0; i < d.rank; ++i)
    for (int a = 0; a < d.dim; ++a) du[static_cast<size_t>(i)][a] = J(i, a);
  return du;
}

}  // namespace

std::vector<KForm> theta(const SphereBundleMap& map) {
  MapData d{map.u, map.conn, map.conn.rank, map.u.source.dim()};
  std::vector<KForm> out;
  for (int i = 0; i < d.rank; ++i) {
    out.push_back(KForm::from_pointwise(map.u.source, 1, [d, i](const Point& p) {
      Vec u = unit_u_at(d.u, p);
      auto du = du_values(d, p);
      return theta_value(u, du, d.conn.omega(p))[static_cast<size_t>(i)];
    }));
  }
  return out;
}

KForm psi_j_form(const SphereBundleMap& map, int j) {
  const int n = map.n();
  if (j < 0 || j > n / 2) throw std::invalid_argument("psi_j: j out of range");
  MapData d{map.u, map.conn, map.conn.rank, map.u.source.dim()};
  return KForm::from_pointwise(map.u.source, n, [d, n, j](const Point& p) {
    Vec u = unit_u_at(d.u, p);
    auto du = du_values(d, p);
    auto th = theta_value(u, du, d.conn.omega(p));
    return psi_j_value(n, j, u, th, d.conn.curvature(p));
  });
}

KForm psi_form(const SphereBundleMap& map) {
  const int n = map.n();
  MapData d{map.u, map.conn, map.conn.rank, map.u.source.dim()};
  return KForm::from_pointwise(map.u.source, n, [d, n](const Point& p) {
    Vec u = unit_u_at(d.u, p);
    auto du = du_values(d, p);
    auto th = theta_value(u, du, d.conn.omega(p));
    return psi_value(n, u, th, d.conn.curvature(p));
  });
}

KForm euler_form(const ConnectionForms& conn) {
  if (conn.rank % 2 != 0) throw std::invalid_argument("Euler form requires even rank");
  FormMatrixField curv = conn.curvature;
  return KForm::from_pointwise(conn.chart, conn.rank,
                               [curv](const Point& p) { return euler_value(curv(p)); });
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

BundleSection section_from_vector_field(const StabilizedGeometry& geom,
                                        const std::vector<BoundaryField>& field,
                                        double fd_step) {
  if (field.size() != geom.base.charts.size())
    throw std::invalid_argument("section_from_vector_field: one boundary field per chart");
  BundleSection sec;
  sec.geom = &geom;
  const int n = geom.base.n;
  for (size_t ci = 0; ci < field.size(); ++ci) {
    const GeometryChart& ch = geom.base.charts[ci];
    ScalarField a = field[ci].normal;
    VectorField t = field[ci].tangential;

    auto raw = [a, t, n](const Point& p) {
      Vec v(n + 1);
      v[0] = a(p);
      Vec tv = t(p);
      for (int i = 0; i < n; ++i) v[i + 1] = tv[i];
      return v;
    };

    // nowhere-zero check on a fixed sample
    std::mt19937_64 rng(0x5eCB0A7DULL + ci);
    for (int s = 0; s < 1000; ++s) {
      Point p = sample_chart_point(ch, rng);
      if (raw(p).norm() <= 1e-6)
        throw std::invalid_argument("vector field vanishes on boundary");
    }

    SmoothMap u;
    u.source = ch.domain;
    u.target_dim = n + 1;
    u.value = [raw](const Point& p) { return raw(p).normalized(); };
    u.fd.step = fd_step;
    sec.u.push_back(std::move(u));
  }
  return sec;
}

BundleSection constant_section(const StabilizedGeometry& geom, double nu_sign) {
  BundleSection sec;
  sec.geom = &geom;
  const int n = geom.base.n;
  for (const GeometryChart& ch : geom.base.charts) {
    const int d = ch.domain.dim();
    SmoothMap u;
    u.source = ch.domain;
    u.target_dim = n + 1;
    u.value = [nu_sign, n](const Point&) {
      Vec v(n + 1);
      v[0] = nu_sign;
      return v;
    };
    u.jacobian_analytic = [n, d](const Point&) { return Mat(n + 1, d); };
    sec.u.push_back(std::move(u));
  }
  return sec;
}

std::vector<KForm> section_psi_pullback(const BundleSection& section) {
  std::vector<KForm> out;
  for (size_t ci = 0; ci < section.u.size(); ++ci) {
    SphereBundleMap map;
    map.u = section.u[ci];
    map.conn = ConnectionForms::on_chart(*section.geom, static_cast<int>(ci));
    out.push_back(psi_form(map));
  }
  return out;
}

}  // namespace transgress
