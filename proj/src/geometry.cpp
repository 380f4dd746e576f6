#include "transgress/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace transgress {

namespace {

constexpr double kPi = std::numbers::pi;

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

FormMatrixField zero_matrix_field(int rank, int dim, int degree) {
  return [rank, dim, degree](const Point&) { return FormMatrix(rank, dim, degree); };
}

void check_spd(const Mat& g, const Point& p) {
  // leading principal minors
  for (int k = 1; k <= g.rows; ++k) {
    Mat sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = g(r, c);
    if (!(sub.det() > 0.0))
      throw std::invalid_argument("metric is not positive definite at point " + point_str(p));
  }
}

}  // namespace

FormMatrixField levi_civita_from_metric(MatrixField metric, ChartDomain chart,
                                        FrameDecomposition frame, int n, double h) {
  if (n > chart.dim())
    throw std::invalid_argument("levi_civita_from_metric: frame rank exceeds chart dimension");
  const int d = chart.dim();
  return [metric, frame, chart, n, d, h](const Point& p_in) {
    Point p = chart.wrap(p_in);
    Mat g = metric(p);
    check_spd(g, p);

    Vec scale(n);
    for (int k = 0; k < n; ++k) scale[k] = 1.0;
    if (frame.column_scale) scale = frame.column_scale(p);
    Mat S = frame.smooth(p);
    Mat B(d, n);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < n; ++k) B(a, k) = S(a, k) * scale[k];

    // orthonormality of the frame for g
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s += B(a, i) * g(a, b) * B(b, j);
        if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-8)
          throw std::invalid_argument("frame is not orthonormal for the metric at point " +
                                      point_str(p));
      }

    // frame derivatives: difference the smooth factor, differentiate the
    // column scale analytically
    Mat scale_grad(d, n);
    if (frame.column_scale_grad) scale_grad = frame.column_scale_grad(p);
    std::array<Mat, kMaxDim> dB;
    for (int b = 0; b < d; ++b) {
      Point pp = p, pm = p;
      pp[b] += h;
      pm[b] -= h;
      Mat Sp = frame.smooth(chart.wrap(pp)), Sm = frame.smooth(chart.wrap(pm));
      Mat der(d, n);
      for (int a = 0; a < d; ++a)
        for (int i = 0; i < n; ++i)
          der(a, i) = (Sp(a, i) - Sm(a, i)) / (2.0 * h) * scale[i] + S(a, i) * scale_grad(b, i);
      dB[static_cast<size_t>(b)] = der;
    }

    // commutator coefficients c_ijk = <[E_i, E_j], E_k>
    double c[kMaxDim][kMaxDim][kMaxDim] = {};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vec bracket(d);
        for (int a = 0; a < d; ++a) {
          double s = 0.0;
          for (int b = 0; b < d; ++b)
            s += B(b, i) * dB[static_cast<size_t>(b)](a, j) -
                 B(b, j) * dB[static_cast<size_t>(b)](a, i);
          bracket[a] = s;
        }
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) s += bracket[a] * g(a, b) * B(b, k);
          c[i][j][k] = s;
          c[j][i][k] = -s;
        }
      }

    // coframe in coordinates: e^k_a = (g B)(a, k)
    Mat gB(d, n);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < d; ++b) s += g(a, b) * B(b, k);
        gB(a, k) = s;
      }

    FormMatrix omega(n, d, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k = 0; k < n; ++k) {
          double w = 0.5 * (c[k][j][i] - c[k][i][j] - c[j][i][k]);
          for (int a = 0; a < d; ++a) omega(i, j)[a] += w * gB(a, k);
        }
      }
    return omega;
  };
}

FormMatrixField levi_civita_from_metric(MatrixField metric, ChartDomain chart,
                                        MatrixField frame, int n, double h) {
  FrameDecomposition dec;
  dec.smooth = std::move(frame);
  return levi_civita_from_metric(std::move(metric), std::move(chart), std::move(dec), n, h);
}

FormMatrixField curvature_from_connection(FormMatrixField omega, ChartDomain chart, int rank,
                                          double h) {
  const int d = chart.dim();
  return [omega, chart, rank, d, h](const Point& p_in) {
    Point p = chart.wrap(p_in);
    FormMatrix w0 = omega(p);
    std::array<FormMatrix, kMaxDim> wp, wm;
    for (int a = 0; a < d; ++a) {
      Point pp = p, pm = p;
      pp[a] += h;
      pm[a] -= h;
      wp[static_cast<size_t>(a)] = omega(chart.wrap(pp));
      wm[static_cast<size_t>(a)] = omega(chart.wrap(pm));
    }

    FormMatrix out(rank, d, 2);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) {
        FormValue dw(d, 2);
        for (int a = 0; a < d; ++a)
          for (int b = a + 1; b < d; ++b) {
            double da_wb = (wp[static_cast<size_t>(a)](i, j)[b] -
                            wm[static_cast<size_t>(a)](i, j)[b]) /
                           (2.0 * h);
            double db_wa = (wp[static_cast<size_t>(b)](i, j)[a] -
                            wm[static_cast<size_t>(b)](i, j)[a]) /
                           (2.0 * h);
            uint8_t mask = static_cast<uint8_t>((1u << a) | (1u << b));
            dw[combi::rank_of_mask(d, 2, mask)] = da_wb - db_wa;
          }
        FormValue sq(d, 2);
        for (int k = 0; k < rank; ++k) sq += wedge(w0(i, k), w0(k, j));
        out(i, j) = dw + sq;
      }
    return out;
  };
}

double torsion_residual(const GeometryChart& chart, int n, const Point& p_in, double h) {
  const int d = chart.domain.dim();
  Point p = chart.domain.wrap(p_in);

  auto coframe = [&](const Point& q) {
    Mat g = chart.metric(q);
    Mat B = chart.frame(q);
    Mat gB(d, n);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < d; ++b) s += g(a, b) * B(b, k);
        gB(a, k) = s;
      }
    return gB;
  };

  Mat e0 = coframe(p);
  std::array<Mat, kMaxDim> ep, em;
  for (int a = 0; a < d; ++a) {
    Point pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    ep[static_cast<size_t>(a)] = coframe(chart.domain.wrap(pp));
    em[static_cast<size_t>(a)] = coframe(chart.domain.wrap(pm));
  }
  FormMatrix omega = chart.omega(p);

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    FormValue res(d, 2);
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        double da_eb = (ep[static_cast<size_t>(a)](b, i) - em[static_cast<size_t>(a)](b, i)) / (2.0 * h);
        double db_ea = (ep[static_cast<size_t>(b)](a, i) - em[static_cast<size_t>(b)](a, i)) / (2.0 * h);
        uint8_t mask = static_cast<uint8_t>((1u << a) | (1u << b));
        res[combi::rank_of_mask(d, 2, mask)] = da_eb - db_ea;
      }
    for (int j = 0; j < n; ++j) {
      FormValue ej(d, 1);
      for (int a = 0; a < d; ++a) ej[a] = e0(a, j);
      res += wedge(omega(i, j), ej);
    }
    worst = std::max(worst, res.max_abs());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Builtin geometries
// ---------------------------------------------------------------------------

namespace {

void require_positive(std::span<const double> params, size_t count, const std::string& name) {
  if (params.size() != count)
    throw std::invalid_argument(name + ": expected " + std::to_string(count) + " parameters");
  for (double v : params)
    if (!(v > 0.0)) throw std::invalid_argument(name + ": shape parameters must be positive");
}

GeometryChart circle_chart() {
  GeometryChart ch;
  ch.name = "circle";
  ch.domain = ChartDomain(1, {{0.0, 2.0 * kPi}}, {true});
  ch.integration_range[0] = {0.0, 2.0 * kPi};
  ch.space = 0;
  ch.embedding.source = ch.domain;
  ch.embedding.target_dim = 2;
  ch.embedding.value = [](const Point& p) { return Vec{std::cos(p[0]), std::sin(p[0])}; };
  ch.embedding.jacobian_analytic = [](const Point& p) {
    Mat J(2, 1);
    J(0, 0) = -std::sin(p[0]);
    J(1, 0) = std::cos(p[0]);
    return J;
  };
  ch.outward_normal = [](const Point& p) { return Vec{std::cos(p[0]), std::sin(p[0])}; };
  ch.metric = [](const Point&) {
    Mat g(1, 1);
    g(0, 0) = 1.0;
    return g;
  };
  ch.frame = [](const Point&) {
    Mat B(1, 1);
    B(0, 0) = 1.0;
    return B;
  };
  ch.omega = zero_matrix_field(1, 1, 1);
  ch.curvature = zero_matrix_field(1, 1, 2);
  return ch;
}

// Colatitude/longitude chart on half of a round or ellipsoidal closed
// surface. `south` flips the embedding so that both charts carry the
// boundary orientation induced by the outward normal.
GeometryChart half_surface_chart(bool south, double a, double b, double c, bool round_form,
                                 const GeomConfig& cfg) {
  GeometryChart ch;
  ch.name = south ? "south" : "north";
  ch.domain = ChartDomain(2, {{0.0, 0.5 * kPi}, {0.0, 2.0 * kPi}}, {false, true});
  ch.integration_range[0] = {0.0, 0.5 * kPi};
  ch.integration_range[1] = {0.0, 2.0 * kPi};
  ch.singular_end[0][0] = true;  // the chart's own pole
  ch.space = south ? 2 : 1;

  const double sy = south ? -1.0 : 1.0;
  ch.embedding.source = ch.domain;
  ch.embedding.target_dim = 3;
  ch.embedding.value = [a, b, c, sy](const Point& p) {
    double st = std::sin(p[0]), ct = std::cos(p[0]);
    double cf = std::cos(p[1]), sf = std::sin(p[1]);
    return Vec{a * st * cf, sy * b * st * sf, sy * c * ct};
  };
  ch.embedding.jacobian_analytic = [a, b, c, sy](const Point& p) {
    double st = std::sin(p[0]), ct = std::cos(p[0]);
    double cf = std::cos(p[1]), sf = std::sin(p[1]);
    Mat J(3, 2);
    J(0, 0) = a * ct * cf;
    J(0, 1) = -a * st * sf;
    J(1, 0) = sy * b * ct * sf;
    J(1, 1) = sy * b * st * cf;
    J(2, 0) = -sy * c * st;
    J(2, 1) = 0.0;
    return J;
  };
  SmoothMap emb = ch.embedding;
  ch.outward_normal = [a, b, c, emb](const Point& p) {
    Vec x = emb.value(p);
    return Vec{x[0] / (a * a), x[1] / (b * b), x[2] / (c * c)}.normalized();
  };
  ch.metric = [emb](const Point& p) {
    Mat J = emb.jacobian_analytic(p);
    Mat g(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += J(k, r) * J(k, s);
        g(r, s) = acc;
      }
    return g;
  };

  if (round_form) {
    // radius-R sphere: closed-form frame, connection and curvature
    const double R = a;
    ch.frame = [R](const Point& p) {
      Mat B(2, 2);
      B(0, 0) = 1.0 / R;
      B(1, 1) = 1.0 / (R * std::sin(p[0]));
      return B;
    };
    ch.omega = [](const Point& p) {
      FormMatrix w(2, 2, 1);
      w(0, 1)[1] = -std::cos(p[0]);
      w(1, 0)[1] = std::cos(p[0]);
      return w;
    };
    ch.curvature = [](const Point& p) {
      FormMatrix W(2, 2, 2);
      W(0, 1)[0] = std::sin(p[0]);
      W(1, 0)[0] = -std::sin(p[0]);
      return W;
    };
  } else {
    // Gram-Schmidt frame with the 1/sin(theta) column scale split off, so
    // the connection's difference stencils only see smooth factors.
    FrameDecomposition dec;
    dec.smooth = [a, b, c](const Point& p) {
      double st = std::sin(p[0]), ct = std::cos(p[0]);
      double cf = std::cos(p[1]), sf = std::sin(p[1]);
      double g11 = a * a * ct * ct * cf * cf + b * b * ct * ct * sf * sf + c * c * st * st;
      double g12t = (b * b - a * a) * ct * sf * cf;  // g12 / sin(theta)
      double lam = std::sqrt(a * a * sf * sf + b * b * cf * cf - g12t * g12t / g11);
      Mat S(2, 2);
      S(0, 0) = 1.0 / std::sqrt(g11);
      S(0, 1) = -g12t * st / (g11 * lam);
      S(1, 1) = 1.0 / lam;
      return S;
    };
    dec.column_scale = [](const Point& p) { return Vec{1.0, 1.0 / std::sin(p[0])}; };
    dec.column_scale_grad = [](const Point& p) {
      Mat grad(2, 2);
      double st = std::sin(p[0]);
      grad(0, 1) = -std::cos(p[0]) / (st * st);
      return grad;
    };
    MatrixField smooth = dec.smooth;
    VectorField scale = dec.column_scale;
    ch.frame = [smooth, scale](const Point& p) {
      Mat S = smooth(p);
      Vec s = scale(p);
      Mat B(2, 2);
      for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 2; ++k) B(r, k) = S(r, k) * s[k];
      return B;
    };
    ch.omega = levi_civita_from_metric(ch.metric, ch.domain, dec, 2, cfg.fd_step_curvature);
    ch.curvature =
        curvature_from_connection(ch.omega, ch.domain, 2, cfg.fd_step_curvature);
    // nested stencils reach 2 steps past a node
    ch.clip_margin = 3.0 * cfg.fd_step_curvature;
  }
  return ch;
}

FramedGeometry sphere_geometry(double R, const GeomConfig& cfg, const std::string& name) {
  FramedGeometry g;
  g.name = name;
  g.n = 2;
  g.base_dim = 2;
  g.charts.push_back(half_surface_chart(false, R, R, R, true, cfg));
  g.charts.push_back(half_surface_chart(true, R, R, R, true, cfg));
  return g;
}

}  // namespace

FramedGeometry builtin_geometry(const std::string& name, std::span<const double> params,
                                const GeomConfig& cfg) {
  if (name == "circle_flat") {
    if (!params.empty()) throw std::invalid_argument("circle_flat takes no parameters");
    FramedGeometry g;
    g.name = name;
    g.n = 1;
    g.base_dim = 1;
    g.charts.push_back(circle_chart());
    return g;
  }
  if (name == "sphere_round") {
    require_positive(params, 1, name);
    return sphere_geometry(params[0], cfg, name);
  }
  if (name == "torus_flat") {
    require_positive(params, 2, name);
    const double r1 = params[0], r2 = params[1];
    FramedGeometry g;
    g.name = name;
    g.n = 2;
    g.base_dim = 2;
    GeometryChart ch;
    ch.name = "torus";
    ch.domain = ChartDomain(2, {{0.0, 2.0 * kPi}, {0.0, 2.0 * kPi}}, {true, true});
    ch.integration_range[0] = {0.0, 2.0 * kPi};
    ch.integration_range[1] = {0.0, 2.0 * kPi};
    ch.space = 0;
    ch.metric = [r1, r2](const Point&) {
      Mat m(2, 2);
      m(0, 0) = r1 * r1;
      m(1, 1) = r2 * r2;
      return m;
    };
    ch.frame = [r1, r2](const Point&) {
      Mat B(2, 2);
      B(0, 0) = 1.0 / r1;
      B(1, 1) = 1.0 / r2;
      return B;
    };
    ch.omega = zero_matrix_field(2, 2, 1);
    ch.curvature = zero_matrix_field(2, 2, 2);
    g.charts.push_back(ch);
    return g;
  }
  if (name == "ellipsoid") {
    require_positive(params, 3, name);
    FramedGeometry g;
    g.name = name;
    g.n = 2;
    g.base_dim = 2;
    g.charts.push_back(half_surface_chart(false, params[0], params[1], params[2], false, cfg));
    g.charts.push_back(half_surface_chart(true, params[0], params[1], params[2], false, cfg));
    return g;
  }
  if (name == "trivial_plane_over_s2") {
    if (!params.empty())
      throw std::invalid_argument("trivial_plane_over_s2 takes no parameters");
    FramedGeometry g = sphere_geometry(1.0, cfg, name);
    // same base surface, but the bundle is globally framed and flat
    for (GeometryChart& ch : g.charts) {
      ch.frame = nullptr;
      ch.omega = zero_matrix_field(2, 2, 1);
      ch.curvature = zero_matrix_field(2, 2, 2);
    }
    return g;
  }
  throw std::invalid_argument("unknown builtin geometry: " + name);
}

// ---------------------------------------------------------------------------
// Stabilization and frame change
// ---------------------------------------------------------------------------

StabilizedGeometry stabilize(FramedGeometry geom) { return {std::move(geom)}; }

FormMatrix StabilizedGeometry::omega_e(int chart, const Point& p) const {
  const GeometryChart& ch = base.charts[static_cast<size_t>(chart)];
  FormMatrix w = ch.omega(p);
  FormMatrix out(base.n + 1, w.dim, 1);
  for (int i = 0; i < base.n; ++i)
    for (int j = 0; j < base.n; ++j) out(i + 1, j + 1) = w(i, j);
  return out;
}

FormMatrix StabilizedGeometry::curvature_e(int chart, const Point& p) const {
  const GeometryChart& ch = base.charts[static_cast<size_t>(chart)];
  FormMatrix W = ch.curvature(p);
  FormMatrix out(base.n + 1, W.dim, 2);
  for (int i = 0; i < base.n; ++i)
    for (int j = 0; j < base.n; ++j) out(i + 1, j + 1) = W(i, j);
  return out;
}

FramedGeometry frame_change(const FramedGeometry& geom, std::vector<MatrixField> g_per_chart,
                            double h) {
  if (g_per_chart.size() != geom.charts.size())
    throw std::invalid_argument("frame_change: one gauge map per chart required");

  FramedGeometry out = geom;
  const int n = geom.n;
  for (size_t ci = 0; ci < geom.charts.size(); ++ci) {
    const GeometryChart& ch = geom.charts[ci];
    MatrixField gf = g_per_chart[ci];
    ChartDomain dom = ch.domain;

    auto checked_g = [gf, n](const Point& p) {
      Mat g = gf(p);
      Mat gtg = g.transposed().mul(g);
      double defect = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          defect = std::max(defect, std::abs(gtg(i, j) - (i == j ? 1.0 : 0.0)));
      if (defect > 1e-9 || !(g.det() > 0.0))
        throw std::invalid_argument("frame change is not special orthogonal at point " +
                                    point_str(p));
      return g;
    };

    if (ch.frame) {
      MatrixField old_frame = ch.frame;
      out.charts[ci].frame = [old_frame, checked_g](const Point& p) {
        return old_frame(p).mul(checked_g(p));
      };
    } else {
      out.charts[ci].frame = checked_g;
    }

    FormMatrixField old_omega = ch.omega;
    const int d = dom.dim();
    out.charts[ci].omega = [old_omega, checked_g, gf, dom, n, d, h](const Point& p_in) {
      Point p = dom.wrap(p_in);
      Mat g = checked_g(p);
      FormMatrix w = old_omega(p);
      FormMatrix out_w(n, d, 1);
      // g^T w g
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          FormValue acc(d, 1);
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) acc += (g(k, i) * g(l, j)) * w(k, l);
          out_w(i, j) = acc;
        }
      // + g^T dg
      std::array<Mat, kMaxDim> gp, gm;
      for (int a = 0; a < d; ++a) {
        Point pp = p, pm = p;
        pp[a] += h;
        pm[a] -= h;
        gp[static_cast<size_t>(a)] = gf(dom.wrap(pp));
        gm[static_cast<size_t>(a)] = gf(dom.wrap(pm));
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int a = 0; a < d; ++a)
              out_w(i, j)[a] += g(k, i) *
                                (gp[static_cast<size_t>(a)](k, j) -
                                 gm[static_cast<size_t>(a)](k, j)) /
                                (2.0 * h);
      return out_w;
    };

    FormMatrixField old_curv = ch.curvature;
    out.charts[ci].curvature = [old_curv, checked_g, dom, n, d](const Point& p_in) {
      Point p = dom.wrap(p_in);
      Mat g = checked_g(p);
      FormMatrix W = old_curv(p);
      FormMatrix out_W(n, d, 2);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          FormValue acc(d, 2);
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) acc += (g(k, i) * g(l, j)) * W(k, l);
          out_W(i, j) = acc;
        }
      return out_W;
    };
  }
  return out;
}

IntegralResult integrate_over_atlas(const std::vector<KForm>& form_per_chart,
                                    const FramedGeometry& geom, const QuadratureSpec& spec,
                                    double fd_step) {
  if (form_per_chart.size() != geom.charts.size())
    throw std::invalid_argument("integrate_over_atlas: one form per chart required");
  std::vector<AtlasPiece> pieces;
  for (size_t i = 0; i < geom.charts.size(); ++i) {
    AtlasPiece piece;
    piece.form = form_per_chart[i];
    piece.range = geom.charts[i].integration_range;
    piece.singular_end = geom.charts[i].singular_end;
    piece.space = geom.charts[i].space;
    piece.clip_margin = geom.charts[i].clip_margin;
    pieces.push_back(std::move(piece));
  }
  return integrate_atlas(pieces, spec, fd_step);
}

BoundaryField boundary_field_from_ambient(const GeometryChart& chart, int n,
                                          VectorField ambient) {
  if (!chart.has_embedding() || !chart.outward_normal)
    throw std::invalid_argument("boundary field requires an embedded chart with outward normal");
  SmoothMap emb = chart.embedding;
  VectorField normal = chart.outward_normal;
  MatrixField frame = chart.frame;
  ChartDomain dom = chart.domain;

  BoundaryField bf;
  bf.normal = [emb, normal, ambient, dom](const Point& p_in) {
    Point p = dom.wrap(p_in);
    Vec v = ambient(emb.value(p));
    return v.dot(normal(p));
  };
  bf.tangential = [emb, frame, ambient, dom, n](const Point& p_in) {
    Point p = dom.wrap(p_in);
    Vec v = ambient(emb.value(p));
    Mat J = emb.jacobian(p);
    Mat B = frame(p);
    Mat frame_amb = J.mul(B);  // ambient components of frame vectors
    Vec t(n);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int r = 0; r < J.rows; ++r) s += v[r] * frame_amb(r, i);
      t[i] = s;
    }
    return t;
  };
  return bf;
}

Point sample_chart_point(const GeometryChart& chart, std::mt19937_64& rng, double margin) {
  const int d = chart.domain.dim();
  const double pad = std::max(margin, chart.clip_margin);
  Point p(d);
  for (int a = 0; a < d; ++a) {
    double lo = chart.integration_range[static_cast<size_t>(a)].lo;
    double hi = chart.integration_range[static_cast<size_t>(a)].hi;
    if (chart.singular_end[static_cast<size_t>(a)][0]) lo += pad;
    if (chart.singular_end[static_cast<size_t>(a)][1]) hi -= pad;
    std::uniform_real_distribution<double> dist(lo, hi);
    p[a] = dist(rng);
  }
  return p;
}

}  // namespace transgress
