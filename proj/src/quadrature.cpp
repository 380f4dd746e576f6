#include "transgress/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace transgress {

void QuadratureSpec::validate() const {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  if (periodic_points < 1) throw std::invalid_argument("periodic point count must be >= 1");
  if (subdivision < 1) throw std::invalid_argument("subdivision must be >= 1");
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }

  std::vector<double> x(static_cast<size_t>(order)), w(static_cast<size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = -z;
    x[static_cast<size_t>(order - 1 - i)] = z;
    w[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<size_t>(order - 1 - i)] = w[static_cast<size_t>(i)];
  }

  std::lock_guard<std::mutex> lock(mu);
  cache[order] = {x, w};
  nodes = x;
  weights = w;
}

namespace {

struct AxisRule {
  std::vector<double> coords;
  std::vector<double> weights;
};

AxisRule gl_axis(const Interval& range, int order, int subdivision) {
  std::vector<double> n01, w01;
  gauss_legendre(order, n01, w01);
  AxisRule rule;
  double cell = range.length() / subdivision;
  for (int c = 0; c < subdivision; ++c) {
    double lo = range.lo + c * cell;
    for (int i = 0; i < order; ++i) {
      rule.coords.push_back(lo + 0.5 * cell * (n01[static_cast<size_t>(i)] + 1.0));
      rule.weights.push_back(0.5 * cell * w01[static_cast<size_t>(i)]);
    }
  }
  return rule;
}

AxisRule trapezoid_axis(const Interval& range, int points) {
  // On a full period the endpoint identification makes this the classic
  // periodic trapezoid rule.
  AxisRule rule;
  double step = range.length() / points;
  for (int i = 0; i < points; ++i) {
    rule.coords.push_back(range.lo + i * step);
    rule.weights.push_back(step);
  }
  return rule;
}

bool covers_full_period(const ChartDomain& dom, int axis, const Interval& range) {
  return std::abs(range.lo - dom.bounds(axis).lo) < 1e-12 &&
         std::abs(range.hi - dom.bounds(axis).hi) < 1e-12;
}

double sum_product_rule(const KForm& form, const std::vector<AxisRule>& rules, int top_rank,
                        bool absolute) {
  const int dim = static_cast<int>(rules.size());
  std::vector<size_t> idx(static_cast<size_t>(dim), 0);
  double total = 0.0;
  while (true) {
    Point p(dim);
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      p[a] = rules[static_cast<size_t>(a)].coords[idx[static_cast<size_t>(a)]];
      w *= rules[static_cast<size_t>(a)].weights[idx[static_cast<size_t>(a)]];
    }
    double f = form.value_at(p)[top_rank];
    total += w * (absolute ? std::abs(f) : f);
    int a = dim - 1;
    while (a >= 0) {
      if (++idx[static_cast<size_t>(a)] < rules[static_cast<size_t>(a)].coords.size()) break;
      idx[static_cast<size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return total;
}

double integrate_once(const KForm& form, const std::array<Interval, kMaxDim>& range,
                      const QuadratureSpec& spec, bool absolute) {
  const ChartDomain& dom = form.domain();
  const int dim = dom.dim();
  std::vector<AxisRule> rules;
  for (int a = 0; a < dim; ++a) {
    const Interval& r = range[static_cast<size_t>(a)];
    if (dom.periodic(a) && covers_full_period(dom, a, r))
      rules.push_back(trapezoid_axis(r, spec.periodic_points * spec.subdivision));
    else
      rules.push_back(gl_axis(r, spec.order, spec.subdivision));
  }
  return sum_product_rule(form, rules, 0, absolute);
}

QuadratureSpec coarse_of(const QuadratureSpec& spec) {
  QuadratureSpec c = spec;
  c.order = std::max(1, spec.order / 2);
  c.periodic_points = std::max(1, spec.periodic_points / 2);
  return c;
}

std::array<Interval, kMaxDim> full_range(const ChartDomain& dom) {
  std::array<Interval, kMaxDim> r{};
  for (int a = 0; a < dom.dim(); ++a) r[static_cast<size_t>(a)] = dom.bounds(a);
  return r;
}

IntegralResult integrate_range(const KForm& form, const std::array<Interval, kMaxDim>& range,
                               const QuadratureSpec& spec) {
  double fine = integrate_once(form, range, spec, false);
  double coarse = integrate_once(form, range, coarse_of(spec), false);
  return {fine, std::abs(fine - coarse)};
}

// (dim-1)-dimensional integral of |f| on the slice x_axis = coord; used to
// bound the mass of a clipped singular strip.
double rim_magnitude(const KForm& form, const std::array<Interval, kMaxDim>& range, int axis,
                     double coord, const QuadratureSpec& spec) {
  const ChartDomain& dom = form.domain();
  const int dim = dom.dim();
  if (dim == 1) {
    Point p(1);
    p[0] = coord;
    return std::abs(form.value_at(p)[0]);
  }
  std::vector<AxisRule> rules;
  for (int a = 0; a < dim; ++a) {
    if (a == axis) {
      rules.push_back({{coord}, {1.0}});
      continue;
    }
    const Interval& r = range[static_cast<size_t>(a)];
    if (dom.periodic(a) && covers_full_period(dom, a, r))
      rules.push_back(trapezoid_axis(r, spec.periodic_points));
    else
      rules.push_back(gl_axis(r, spec.order, 1));
  }
  return sum_product_rule(form, rules, 0, true);
}

}  // namespace

IntegralResult integrate(const KForm& form, const ChartDomain& domain,
                         const QuadratureSpec& spec) {
  spec.validate();
  if (!form.domain().same_as(domain))
    throw std::invalid_argument("integrate: form domain does not match integration domain");
  if (form.degree() != domain.dim())
    throw std::invalid_argument("integrate: form degree does not match domain dimension");
  if (form.is_zero()) return {0.0, 0.0};
  return integrate_range(form, full_range(domain), spec);
}

IntegralResult integrate_atlas(std::span<const AtlasPiece> pieces, const QuadratureSpec& spec,
                               double fd_step) {
  spec.validate();

  // Ranges sharing a coordinate space must partition it disjointly.
  for (size_t i = 0; i < pieces.size(); ++i) {
    for (size_t j = i + 1; j < pieces.size(); ++j) {
      if (pieces[i].space < 0 || pieces[i].space != pieces[j].space) continue;
      const int dim = pieces[i].form.domain().dim();
      bool overlap = true;
      for (int a = 0; a < dim; ++a) {
        const Interval& ra = pieces[i].range[static_cast<size_t>(a)];
        const Interval& rb = pieces[j].range[static_cast<size_t>(a)];
        if (std::min(ra.hi, rb.hi) - std::max(ra.lo, rb.lo) <= 1e-12) overlap = false;
      }
      if (overlap)
        throw std::invalid_argument("overlapping chart integration ranges");
    }
  }

  IntegralResult total;
  for (const AtlasPiece& piece : pieces) {
    const int dim = piece.form.domain().dim();
    if (piece.form.degree() != dim)
      throw std::invalid_argument("integrate_atlas: piece is not a top form");

    // Keep quadrature nodes and their difference stencils clear of excluded
    // singular endpoints. The strip deficit bound below scales like clip^2,
    // so the clip stays as tight as stencil safety allows.
    const double clip = std::max({1.5 * fd_step, piece.clip_margin, 1e-8});

    std::array<Interval, kMaxDim> range = piece.range;
    double deficit = 0.0;
    for (int a = 0; a < dim; ++a) {
      Interval& r = range[static_cast<size_t>(a)];
      if (piece.singular_end[static_cast<size_t>(a)][0]) r.lo += clip;
      if (piece.singular_end[static_cast<size_t>(a)][1]) r.hi -= clip;
      if (!(r.length() > 0.0))
        throw std::invalid_argument("integrate_atlas: clipped range is empty");
    }
    IntegralResult part = integrate_range(piece.form, range, spec);
    for (int a = 0; a < dim; ++a) {
      if (piece.singular_end[static_cast<size_t>(a)][0])
        deficit += clip * rim_magnitude(piece.form, range, a, range[static_cast<size_t>(a)].lo, spec);
      if (piece.singular_end[static_cast<size_t>(a)][1])
        deficit += clip * rim_magnitude(piece.form, range, a, range[static_cast<size_t>(a)].hi, spec);
    }
    total.value += part.value;
    total.error_estimate += part.error_estimate + deficit;
  }
  return total;
}

KForm restrict_to_face(const KForm& form, int axis, bool upper) {
  const ChartDomain& dom = form.domain();
  const int dim = dom.dim();
  if (dim < 1 || axis < 0 || axis >= dim)
    throw std::invalid_argument("restrict_to_face: axis out of range");
  for (int a = 0; a < dim; ++a)
    if (dom.periodic(a))
      throw std::invalid_argument("restrict_to_face: cube domain must be non-periodic");

  std::vector<Interval> face_bounds;
  for (int a = 0; a < dim; ++a)
    if (a != axis) face_bounds.push_back(dom.bounds(a));
  if (dim == 1) {
    // 0-dimensional face: represent as a point evaluation through apply();
    // callers handle this case directly.
    throw std::invalid_argument("restrict_to_face: 1-dimensional domain has point faces");
  }
  ChartDomain face(dim - 1, face_bounds);

  const double coord = upper ? dom.bounds(axis).hi : dom.bounds(axis).lo;
  const int k = form.degree();
  KForm fv = form;
  return KForm::from_pointwise(face, k, [fv, axis, coord, dim, k](const Point& q) {
    Point p(dim);
    int qi = 0;
    for (int a = 0; a < dim; ++a) p[a] = (a == axis) ? coord : q[qi++];
    FormValue v = fv.value_at(p);
    FormValue out(dim - 1, k);
    const auto& face_masks = combi::masks(dim - 1, k);
    const uint8_t low = static_cast<uint8_t>((1u << axis) - 1u);
    for (size_t r = 0; r < face_masks.size(); ++r) {
      uint8_t fm = face_masks[r];
      // reinsert the dropped axis gap
      uint8_t src = static_cast<uint8_t>((fm & low) | ((fm & ~low) << 1));
      out[static_cast<int>(r)] = v[combi::rank_of_mask(dim, k, src)];
    }
    return out;
  });
}

IntegralResult boundary_integral(const KForm& form, const QuadratureSpec& spec) {
  const ChartDomain& dom = form.domain();
  const int dim = dom.dim();
  if (form.degree() != dim - 1)
    throw std::invalid_argument("boundary_integral: form degree must be dim - 1");

  if (dim == 1) {
    // Telescoping endpoint evaluation of a 0-form.
    Point hi(1), lo(1);
    hi[0] = dom.bounds(0).hi;
    lo[0] = dom.bounds(0).lo;
    double v = form.value_at(hi)[0] - form.value_at(lo)[0];
    return {v, 0.0};
  }

  IntegralResult total;
  for (int a = 0; a < dim; ++a) {
    double sign = (a % 2 == 0) ? 1.0 : -1.0;
    KForm top = restrict_to_face(form, a, true);
    KForm bot = restrict_to_face(form, a, false);
    IntegralResult it = integrate(top, top.domain(), spec);
    IntegralResult ib = integrate(bot, bot.domain(), spec);
    total.value += sign * (it.value - ib.value);
    total.error_estimate += it.error_estimate + ib.error_estimate;
  }
  return total;
}

}  // namespace transgress
