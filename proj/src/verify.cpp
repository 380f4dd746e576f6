#include "transgress/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "transgress/cubes.hpp"
#include "transgress/geometry.hpp"
#include "transgress/indices.hpp"
#include "transgress/transgression.hpp"

namespace transgress {

namespace {
constexpr double kPi = std::numbers::pi;
}

QuadratureSpec RunConfig::effective_spec(const Scenario& s) const {
  QuadratureSpec spec = s.quadrature;
  if (order) spec.order = *order;
  if (periodic_points) spec.periodic_points = *periodic_points;
  if (subdivision) spec.subdivision = *subdivision;
  return spec;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

AmbientField build_field(const json& field_spec, int dim) {
  const std::string kind = field_spec.at("kind").get<std::string>();
  AmbientField f;
  f.dim = dim;

  if (kind == "complex_power") {
    if (dim != 2) throw std::invalid_argument("complex_power field needs a planar domain");
    const int d = field_spec.at("power").get<int>();
    f.value = [d](const Vec& p) {
      std::complex<double> z(p[0], p[1]);
      std::complex<double> w = (d >= 0) ? std::pow(z, d) : std::pow(std::conj(z), -d);
      return Vec{w.real(), w.imag()};
    };
    f.jacobian = [d](const Vec& p) {
      std::complex<double> z(p[0], p[1]);
      Mat J(2, 2);
      if (d == 0) return J;
      int k = std::abs(d);
      std::complex<double> g = static_cast<double>(k) * std::pow(z, k - 1);
      if (d > 0) {
        J(0, 0) = g.real();
        J(0, 1) = -g.imag();
        J(1, 0) = g.imag();
        J(1, 1) = g.real();
      } else {
        // conj(z)^k: conjugate structure, reflected off-diagonal
        J(0, 0) = g.real();
        J(0, 1) = -g.imag();
        J(1, 0) = -g.imag();
        J(1, 1) = -g.real();
      }
      return J;
    };
    return f;
  }

  if (kind == "polynomial") {
    struct Monomial {
      double c;
      std::vector<int> powers;
    };
    auto components = std::make_shared<std::vector<std::vector<Monomial>>>();
    for (const json& comp : field_spec.at("components")) {
      std::vector<Monomial> terms;
      for (const json& t : comp)
        terms.push_back({t.at("c").get<double>(), t.at("powers").get<std::vector<int>>()});
      components->push_back(std::move(terms));
    }
    if (static_cast<int>(components->size()) != dim)
      throw std::invalid_argument("polynomial field has wrong component count");

    auto eval_term = [](const Monomial& m, const Vec& p) {
      double v = m.c;
      for (size_t a = 0; a < m.powers.size(); ++a)
        for (int k = 0; k < m.powers[a]; ++k) v *= p[static_cast<int>(a)];
      return v;
    };
    f.value = [components, eval_term, dim](const Vec& p) {
      Vec out(dim);
      for (int i = 0; i < dim; ++i)
        for (const Monomial& m : (*components)[static_cast<size_t>(i)]) out[i] += eval_term(m, p);
      return out;
    };
    f.jacobian = [components, eval_term, dim](const Vec& p) {
      Mat J(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (const Monomial& m : (*components)[static_cast<size_t>(i)])
          for (int a = 0; a < dim; ++a) {
            if (m.powers[static_cast<size_t>(a)] == 0) continue;
            Monomial dm = m;
            dm.c *= dm.powers[static_cast<size_t>(a)];
            --dm.powers[static_cast<size_t>(a)];
            J(i, a) += eval_term(dm, p);
          }
      return J;
    };
    return f;
  }

  throw std::invalid_argument("unknown field kind: " + kind);
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

namespace {

Report make_report(const Scenario& s, const RunConfig& cfg) {
  Report r;
  r.scenario = s.name;
  r.quadrature = cfg.effective_spec(s);
  r.fd_step = cfg.effective_fd();
  r.timestamp = iso_timestamp_utc();
  return r;
}

CheckRecord make_check(const Scenario& s, const std::string& id, double lhs,
                       double error_estimate = 0.0, std::string note = {}) {
  const ExpectedCheck& e = s.expect(id);
  CheckRecord c;
  c.check_id = id;
  c.lhs = lhs;
  c.rhs = e.value;
  c.abs_err = std::abs(c.lhs - c.rhs);
  c.tolerance = e.tol;
  c.error_estimate = error_estimate;
  c.pass = c.abs_err <= c.tolerance;
  c.provenance = e.provenance;
  c.oracle = e.oracle;
  if (c.note = std::move(note); c.note == "inconclusive") c.pass = false;
  return c;
}

GeomConfig geom_config(const RunConfig& cfg) {
  GeomConfig g;
  g.fd_step = cfg.effective_fd();
  g.fd_step_curvature = cfg.fd_step_curvature;
  return g;
}

FramedGeometry scenario_geometry(const Scenario& s, const RunConfig& cfg) {
  return builtin_geometry(s.geometry_name, s.geometry_params, geom_config(cfg));
}

// alpha*(Psi) integrated over the atlas for the section defined by an
// ambient field along the embedded boundary geometry
IntegralResult section_integral_from_field(const StabilizedGeometry& stab,
                                           const AmbientField& field, const QuadratureSpec& spec,
                                           double fd) {
  std::vector<BoundaryField> bfs;
  for (const GeometryChart& ch : stab.base.charts)
    bfs.push_back(boundary_field_from_ambient(ch, stab.base.n, field.value));
  BundleSection sec = section_from_vector_field(stab, bfs, fd);
  std::vector<KForm> forms = section_psi_pullback(sec);
  return integrate_over_atlas(forms, stab.base, spec, fd);
}

KForm base_euler_form(const GeometryChart& ch, int n) {
  ConnectionForms conn;
  conn.rank = n;
  conn.chart = ch.domain;
  conn.omega = ch.omega;
  conn.curvature = ch.curvature;
  return euler_form(conn);
}

}  // namespace

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

Report verify_index_identity(const Scenario& s, const RunConfig& cfg) {
  Report report = make_report(s, cfg);
  QuadratureSpec spec = cfg.effective_spec(s);
  const double fd = cfg.effective_fd();

  FramedGeometry geom = scenario_geometry(s, cfg);
  StabilizedGeometry stab = stabilize(std::move(geom));
  const int n = stab.base.n;
  if (!s.parity.empty() && (s.parity == "odd") != (n % 2 == 1))
    throw std::invalid_argument("scenario parity is inconsistent with the geometry");
  const int ambient_dim = n + 1;
  AmbientField field = build_field(s.field, ambient_dim);

  // indices of the declared interior zeros
  std::vector<IsolatedZero> zeros;
  for (const ZeroSpec& zs : s.zeros) {
    IsolatedZero z;
    z.location = Vec(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) z.location[i] = zs.location[static_cast<size_t>(i)];
    z.isolation_radius = zs.isolation_radius;
    if (zs.auto_jacobian) z.jacobian = field.jacobian;
    zeros.push_back(std::move(z));
  }
  const int sum = sum_indices(zeros, field.value, ambient_dim, 1.0, spec);
  report.checks.push_back(make_check(s, "sum_indices", sum));

  IntegralResult integ = section_integral_from_field(stab, field, spec, fd);
  {
    const ExpectedCheck& e = s.expect("alpha_psi_integral");
    std::string note = integ.error_estimate > 0.5 * e.tol ? "inconclusive" : "";
    report.checks.push_back(make_check(s, "alpha_psi_integral", integ.value, integ.error_estimate, note));
  }

  const double rhs = (n % 2 == 1 ? s.chi : 0) + integ.value;
  report.checks.push_back(make_check(s, "index_identity", sum - rhs, integ.error_estimate));
  return report;
}

Report verify_form_normalization(const Scenario& s, const RunConfig& cfg) {
  Report report = make_report(s, cfg);
  QuadratureSpec spec = cfg.effective_spec(s);
  const double fd = cfg.effective_fd();

  if (s.kind == "fiber_normalization") {
    const int n = s.extra.at("n").get<int>();
    SphereBundleMap fib = fiber_inclusion(n);
    fib.u.fd.step = fd;
    IntegralResult r = integrate(psi_form(fib), fib.u.source, spec);
    report.checks.push_back(make_check(s, "fiber_integral", r.value, r.error_estimate));
    return report;
  }

  const int n = s.extra.at("n").get<int>();
  const int count = s.extra.at("cubes").get<int>();
  const uint64_t seed = s.extra.at("seed").get<uint64_t>();

  if (s.kind == "stokes_cubes") {
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      CubeCase cube = make_synthetic_cube(n, true, seed + static_cast<uint64_t>(k), fd);
      IntegralResult b = boundary_integral(psi_form(cube.map), spec);
      worst = std::max(worst, std::abs(b.value) / std::pow(cube.scale, n + 1));
    }
    report.checks.push_back(make_check(s, "max_boundary_ratio", worst));
    return report;
  }

  if (s.kind == "transgression_cubes") {
    if (n % 2 == 0) throw std::invalid_argument("transgression cubes need odd n");
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      CubeCase cube = make_synthetic_cube(n, false, seed + static_cast<uint64_t>(k), fd);
      IntegralResult lhs = boundary_integral(psi_form(cube.map), spec);
      IntegralResult rhs = integrate(euler_form(cube.map.conn), cube.map.conn.chart, spec);
      double tol = 1e-6 * std::pow(cube.scale, n + 1) +
                   10.0 * (lhs.error_estimate + rhs.error_estimate);
      worst = std::max(worst, std::abs(lhs.value + rhs.value) / tol);
    }
    report.checks.push_back(make_check(s, "max_residual_ratio", worst));
    return report;
  }

  throw std::invalid_argument("verify_form_normalization: unsupported kind " + s.kind);
}

Report verify_gauss_bonnet(const Scenario& s, const RunConfig& cfg) {
  Report report = make_report(s, cfg);
  QuadratureSpec spec = cfg.effective_spec(s);
  FramedGeometry geom = scenario_geometry(s, cfg);
  std::vector<KForm> forms;
  for (const GeometryChart& ch : geom.charts) forms.push_back(base_euler_form(ch, geom.n));
  IntegralResult r = integrate_over_atlas(forms, geom, spec, cfg.effective_fd());
  report.checks.push_back(make_check(s, "euler_integral", r.value, r.error_estimate));
  return report;
}

// ---------------------------------------------------------------------------
// Section properties, pointwise cases, frame equivariance
// ---------------------------------------------------------------------------

namespace {

IntegralResult constant_section_integral(const StabilizedGeometry& stab, double nu_sign,
                                         const QuadratureSpec& spec, double fd) {
  BundleSection sec = constant_section(stab, nu_sign);
  std::vector<KForm> forms = section_psi_pullback(sec);
  return integrate_over_atlas(forms, stab.base, spec, fd);
}

// rotation by a smooth random angle field
MatrixField random_angle_gauge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double b0 = unit(rng), b1 = unit(rng), b2 = unit(rng);
  double c1 = kPi * unit(rng), c2 = kPi * unit(rng);
  return [b0, b1, b2, c1, c2](const Point& p) {
    double beta = b0 + b1 * std::sin(p[0] + c1) + b2 * std::cos((p.size() > 1 ? p[1] : p[0]) + c2);
    Mat m(2, 2);
    m(0, 0) = std::cos(beta);
    m(0, 1) = -std::sin(beta);
    m(1, 0) = std::sin(beta);
    m(1, 1) = std::cos(beta);
    return m;
  };
}

struct SectionData {
  std::vector<BoundaryField> fields;
};

// generic nowhere-zero boundary data for the equivariance scenarios
SectionData equivariance_section_data(const StabilizedGeometry& stab) {
  SectionData data;
  if (!stab.base.charts[0].has_embedding()) {
    // abstract flat torus: explicit frame components
    for (size_t ci = 0; ci < stab.base.charts.size(); ++ci) {
      (void)ci;
      BoundaryField bf;
      bf.normal = [](const Point& p) { return 0.6 + 0.2 * std::sin(p[0]); };
      bf.tangential = [](const Point& p) {
        return Vec{0.5 * std::cos(p[1]), 0.4 * std::sin(p[0] + p[1])};
      };
      data.fields.push_back(std::move(bf));
    }
    return data;
  }
  AmbientField field = build_field(json{{"kind", "polynomial"},
                                        {"components",
                                         {json::array({{{"c", 1.0}, {"powers", {1, 0, 0}}},
                                                       {{"c", -0.20}, {"powers", {0, 0, 0}}}}),
                                          json::array({{{"c", 1.0}, {"powers", {0, 1, 0}}},
                                                       {{"c", -0.10}, {"powers", {0, 0, 0}}}}),
                                          json::array({{{"c", 1.0}, {"powers", {0, 0, 1}}},
                                                       {{"c", 0.15}, {"powers", {0, 0, 0}}}})}}},
                                   3);
  for (const GeometryChart& ch : stab.base.charts)
    data.fields.push_back(boundary_field_from_ambient(ch, stab.base.n, field.value));
  return data;
}

// tangential components re-expressed in a rotated frame
std::vector<BoundaryField> rotate_boundary_fields(const std::vector<BoundaryField>& fields,
                                                  const std::vector<MatrixField>& gauges, int n) {
  std::vector<BoundaryField> out;
  for (size_t ci = 0; ci < fields.size(); ++ci) {
    BoundaryField bf;
    bf.normal = fields[ci].normal;
    VectorField t = fields[ci].tangential;
    MatrixField g = gauges[ci];
    bf.tangential = [t, g, n](const Point& p) {
      Vec v = t(p);
      Mat m = g(p);
      Vec out_v(n);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += m(k, i) * v[k];
        out_v[i] = s;
      }
      return out_v;
    };
    out.push_back(std::move(bf));
  }
  return out;
}

}  // namespace

Report verify_section_properties(const Scenario& s, const RunConfig& cfg) {
  Report report = make_report(s, cfg);
  QuadratureSpec spec = cfg.effective_spec(s);
  const double fd = cfg.effective_fd();

  if (s.kind == "section_property") {
    StabilizedGeometry stab = stabilize(scenario_geometry(s, cfg));
    const double nu = s.extra.at("section").get<std::string>() == "zero" ? 1.0 : -1.0;
    IntegralResult r = constant_section_integral(stab, nu, spec, fd);
    report.checks.push_back(make_check(s, "section_integral", r.value, r.error_estimate));
    return report;
  }

  if (s.kind == "connection_independence") {
    StabilizedGeometry stab = stabilize(scenario_geometry(s, cfg));
    SphereBundleMap fib = fiber_inclusion(stab.base.n);
    fib.u.fd.step = fd;
    IntegralResult rf = integrate(psi_form(fib), fib.u.source, spec);
    report.checks.push_back(make_check(s, "fiber_integral", rf.value, rf.error_estimate));
    IntegralResult rz = constant_section_integral(stab, 1.0, spec, fd);
    report.checks.push_back(make_check(s, "zero_section_integral", rz.value, rz.error_estimate));
    IntegralResult ri = constant_section_integral(stab, -1.0, spec, fd);
    report.checks.push_back(make_check(s, "infinity_section_integral", ri.value, ri.error_estimate));
    return report;
  }

  if (s.kind == "pointwise_special") {
    const std::string which = s.extra.at("case").get<std::string>();
    const int samples = s.extra.value("samples", 1000);
    std::mt19937_64 rng(s.extra.value("seed", 811));
    double worst = 0.0;

    if (which == "outward_circle" || which == "outward_sphere") {
      const bool sphere = which == "outward_sphere";
      GeomConfig gc = geom_config(cfg);
      FramedGeometry geom =
          sphere ? builtin_geometry("sphere_round", std::vector<double>{1.0}, gc)
                 : builtin_geometry("circle_flat", {}, gc);
      StabilizedGeometry stab = stabilize(std::move(geom));
      BundleSection sec = constant_section(stab, 1.0);
      std::vector<KForm> psi = section_psi_pullback(sec);
      for (int t = 0; t < samples; ++t) {
        size_t ci = static_cast<size_t>(t) % stab.base.charts.size();
        const GeometryChart& ch = stab.base.charts[ci];
        Point p = sample_chart_point(ch, rng);
        FormValue got = psi[ci].value_at(p);
        if (sphere) {
          // half the euler curvature form of the base surface
          FormValue half_e = 0.5 * base_euler_form(ch, 2).value_at(p);
          worst = std::max(worst, (got - half_e).max_abs());
        } else {
          worst = std::max(worst, got.max_abs());
        }
      }
    } else if (which == "tangent_circle" || which == "tangent_torus") {
      GeomConfig gc = geom_config(cfg);
      FramedGeometry geom =
          which == "tangent_circle"
              ? builtin_geometry("circle_flat", {}, gc)
              : builtin_geometry("torus_flat", std::vector<double>{1.5, 1.0}, gc);
      StabilizedGeometry stab = stabilize(std::move(geom));
      std::vector<BoundaryField> bfs;
      for (size_t ci = 0; ci < stab.base.charts.size(); ++ci) {
        BoundaryField bf;
        bf.normal = [](const Point&) { return 0.0; };
        if (stab.base.n == 1)
          bf.tangential = [](const Point&) { return Vec{1.0}; };
        else
          bf.tangential = [](const Point& p) { return Vec{std::cos(p[0]), std::sin(p[0])}; };
        bfs.push_back(std::move(bf));
      }
      BundleSection sec = section_from_vector_field(stab, bfs, fd);
      std::vector<KForm> psi = section_psi_pullback(sec);
      for (int t = 0; t < samples; ++t) {
        size_t ci = static_cast<size_t>(t) % stab.base.charts.size();
        Point p = sample_chart_point(stab.base.charts[ci], rng);
        worst = std::max(worst, psi[ci].value_at(p).max_abs());
      }
    } else {
      throw std::invalid_argument("unknown pointwise case: " + which);
    }
    report.checks.push_back(make_check(s, "max_pointwise_deviation", worst));
    return report;
  }

  if (s.kind == "frame_equivariance") {
    const int frames = s.extra.at("frames").get<int>();
    const int samples = s.extra.at("samples").get<int>();
    std::mt19937_64 rng(s.extra.at("seed").get<uint64_t>());
    // the two evaluation routes agree only to the differencing truncation,
    // so the step is capped; it is part of the check's definition
    const double fd_eq = std::min(fd, 1e-5);

    FramedGeometry geom = scenario_geometry(s, cfg);
    StabilizedGeometry stab = stabilize(std::move(geom));
    SectionData data = equivariance_section_data(stab);
    BundleSection sec = section_from_vector_field(stab, data.fields, fd_eq);
    std::vector<KForm> psi = section_psi_pullback(sec);

    // reference values
    std::vector<std::vector<Point>> pts(stab.base.charts.size());
    std::vector<std::vector<FormValue>> ref(stab.base.charts.size());
    for (size_t ci = 0; ci < stab.base.charts.size(); ++ci)
      for (int t = 0; t < samples; ++t) {
        Point p = sample_chart_point(stab.base.charts[ci], rng, 5e-2);
        pts[ci].push_back(p);
        ref[ci].push_back(psi[ci].value_at(p));
      }

    double worst = 0.0;
    for (int fr = 0; fr < frames; ++fr) {
      std::vector<MatrixField> gauges;
      for (size_t ci = 0; ci < stab.base.charts.size(); ++ci)
        gauges.push_back(random_angle_gauge(rng));
      FramedGeometry rotated = frame_change(stab.base, gauges, fd_eq);
      StabilizedGeometry stab2 = stabilize(std::move(rotated));
      std::vector<BoundaryField> bfs2;
      if (stab.base.charts[0].has_embedding()) {
        // re-derive from the ambient field against the rotated frame
        SectionData d2 = equivariance_section_data(stab2);
        bfs2 = std::move(d2.fields);
      } else {
        bfs2 = rotate_boundary_fields(data.fields, gauges, stab.base.n);
      }
      BundleSection sec2 = section_from_vector_field(stab2, bfs2, fd_eq);
      std::vector<KForm> psi2 = section_psi_pullback(sec2);
      for (size_t ci = 0; ci < pts.size(); ++ci)
        for (size_t t = 0; t < pts[ci].size(); ++t) {
          FormValue got = psi2[ci].value_at(pts[ci][t]);
          worst = std::max(worst, (got - ref[ci][t]).max_abs());
        }
    }
    report.checks.push_back(make_check(s, "max_frame_deviation", worst));
    return report;
  }

  throw std::invalid_argument("verify_section_properties: unsupported kind " + s.kind);
}

Report verify_thom_pairing(const Scenario& s, const RunConfig& cfg) {
  Report report = make_report(s, cfg);
  QuadratureSpec spec = cfg.effective_spec(s);
  const double fd = cfg.effective_fd();

  StabilizedGeometry stab = stabilize(scenario_geometry(s, cfg));
  const int n = stab.base.n;

  // infinity-section pullback of (psi + half the euler form of the bundle)
  BundleSection inf_sec = constant_section(stab, -1.0);
  std::vector<KForm> forms = section_psi_pullback(inf_sec);
  for (size_t ci = 0; ci < forms.size(); ++ci)
    forms[ci] = forms[ci] + 0.5 * base_euler_form(stab.base.charts[ci], n);
  IntegralResult ri = integrate_over_atlas(forms, stab.base, spec, fd);
  report.checks.push_back(make_check(s, "infinity_combination", ri.value, ri.error_estimate));

  // fibre pairing: the euler term pulls back through a constant base point
  SphereBundleMap fib = fiber_inclusion(n);
  fib.u.fd.step = fd;
  KForm psi_fib = psi_form(fib);
  SmoothMap const_base;
  const_base.source = fib.u.source;
  const_base.target_dim = stab.base.charts[0].domain.dim();
  Point base_point = stab.base.charts[0].domain.center();
  const_base.value = [base_point](const Point&) { return base_point; };
  const_base.jacobian_analytic = [td = const_base.target_dim,
                                  sd = const_base.source.dim()](const Point&) {
    return Mat(td, sd);
  };
  KForm pulled_euler = pullback(base_euler_form(stab.base.charts[0], n), const_base);
  KForm combined = psi_fib + 0.5 * pulled_euler;
  IntegralResult rf = integrate(combined, fib.u.source, spec);
  report.checks.push_back(make_check(s, "fiber_combination", rf.value, rf.error_estimate));
  return report;
}

Report run_scenario(const Scenario& s, const RunConfig& cfg) {
  if (s.kind == "index_identity") return verify_index_identity(s, cfg);
  if (s.kind == "fiber_normalization" || s.kind == "stokes_cubes" ||
      s.kind == "transgression_cubes")
    return verify_form_normalization(s, cfg);
  if (s.kind == "gauss_bonnet") return verify_gauss_bonnet(s, cfg);
  if (s.kind == "section_property" || s.kind == "connection_independence" ||
      s.kind == "pointwise_special" || s.kind == "frame_equivariance")
    return verify_section_properties(s, cfg);
  if (s.kind == "thom_shadow") return verify_thom_pairing(s, cfg);
  throw std::invalid_argument("unknown scenario kind: " + s.kind);
}

}  // namespace transgress
