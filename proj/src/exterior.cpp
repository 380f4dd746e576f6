#include "transgress/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace transgress {

// ---------------------------------------------------------------------------
// Vec / Mat
// ---------------------------------------------------------------------------

double Vec::norm() const { return std::sqrt(dot(*this)); }

double Vec::dot(const Vec& o) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[static_cast<size_t>(i)] * o[i];
  return s;
}

Vec Vec::normalized() const {
  double r = norm();
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = x[static_cast<size_t>(i)] / r;
  return out;
}

Vec Vec::operator+(const Vec& o) const {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = (*this)[i] + o[i];
  return out;
}

Vec Vec::operator-(const Vec& o) const {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = (*this)[i] - o[i];
  return out;
}

Vec Vec::operator*(double s) const {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = (*this)[i] * s;
  return out;
}

Mat Mat::identity(int d) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transposed() const {
  Mat m(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Vec Mat::apply(const Vec& v) const {
  Vec out(rows);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

Mat Mat::mul(const Mat& o) const {
  Mat out(rows, o.cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < o.cols; ++c) {
      double s = 0.0;
      for (int k = 0; k < cols; ++k) s += (*this)(r, k) * o(k, c);
      out(r, c) = s;
    }
  return out;
}

double Mat::det() const {
  if (rows != cols) throw std::invalid_argument("det: matrix not square");
  const Mat& m = *this;
  switch (rows) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    case 4: {
      double d = 0.0;
      for (int c = 0; c < 4; ++c) {
        Mat sub(3, 3);
        for (int r = 1; r < 4; ++r) {
          int cc = 0;
          for (int k = 0; k < 4; ++k) {
            if (k == c) continue;
            sub(r - 1, cc++) = m(r, k);
          }
        }
        d += ((c % 2 == 0) ? 1.0 : -1.0) * m(0, c) * sub.det();
      }
      return d;
    }
    default:
      throw std::invalid_argument("det: dimension > 4 unsupported");
  }
}

// ---------------------------------------------------------------------------
// ChartDomain
// ---------------------------------------------------------------------------

ChartDomain::ChartDomain(int dim, std::vector<Interval> bounds, std::vector<bool> periodic)
    : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("chart dim out of range");
  if (static_cast<int>(bounds.size()) != dim)
    throw std::invalid_argument("chart bounds size mismatch");
  for (int i = 0; i < dim; ++i) {
    if (!(bounds[static_cast<size_t>(i)].length() > 0.0))
      throw std::invalid_argument("chart interval must have positive length");
    bounds_[static_cast<size_t>(i)] = bounds[static_cast<size_t>(i)];
  }
  if (!periodic.empty()) {
    if (static_cast<int>(periodic.size()) != dim)
      throw std::invalid_argument("chart periodic flags size mismatch");
    for (int i = 0; i < dim; ++i) periodic_[static_cast<size_t>(i)] = periodic[static_cast<size_t>(i)];
  }
}

Point ChartDomain::wrap(const Point& p) const {
  Point q = p;
  for (int i = 0; i < dim_; ++i) {
    if (!periodic_[static_cast<size_t>(i)]) continue;
    const Interval& b = bounds_[static_cast<size_t>(i)];
    double L = b.length();
    double t = std::fmod(q[i] - b.lo, L);
    if (t < 0.0) t += L;
    q[i] = b.lo + t;
  }
  return q;
}

Point ChartDomain::center() const {
  Point p(dim_);
  for (int i = 0; i < dim_; ++i)
    p[i] = 0.5 * (bounds_[static_cast<size_t>(i)].lo + bounds_[static_cast<size_t>(i)].hi);
  return p;
}

bool ChartDomain::same_as(const ChartDomain& o) const {
  if (dim_ != o.dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (bounds_[static_cast<size_t>(i)].lo != o.bounds_[static_cast<size_t>(i)].lo) return false;
    if (bounds_[static_cast<size_t>(i)].hi != o.bounds_[static_cast<size_t>(i)].hi) return false;
    if (periodic_[static_cast<size_t>(i)] != o.periodic_[static_cast<size_t>(i)]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Combinatorics
// ---------------------------------------------------------------------------

namespace combi {

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

namespace {

struct CombTable {
  std::vector<uint8_t> mask_list;      // lex order
  std::array<int8_t, 64> rank{};       // mask -> rank, -1 if absent

  CombTable(int dim, int k) {
    rank.fill(-1);
    // enumerate k-subsets in lexicographic order of increasing sequences
    std::vector<int> idx(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    if (k == 0) {
      mask_list.push_back(0);
      rank[0] = 0;
      return;
    }
    while (true) {
      uint8_t m = 0;
      for (int v : idx) m |= static_cast<uint8_t>(1u << v);
      rank[m] = static_cast<int8_t>(mask_list.size());
      mask_list.push_back(m);
      // next combination
      int i = k - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == dim - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
};

const CombTable& table(int dim, int k) {
  static std::map<std::pair<int, int>, CombTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, CombTable(dim, k)).first;
  return it->second;
}

}  // namespace

const std::vector<uint8_t>& masks(int dim, int k) { return table(dim, k).mask_list; }

int rank_of_mask(int dim, int k, uint8_t mask) {
  int r = table(dim, k).rank[mask];
  if (r < 0) throw std::logic_error("rank_of_mask: mask has wrong cardinality");
  return r;
}

int merge_sign(uint8_t a, uint8_t b) {
  // inversions: pairs (i in a, j in b) with i > j
  int inv = 0;
  for (int i = 0; i < 8; ++i) {
    if (!(a & (1u << i))) continue;
    inv += std::popcount(static_cast<unsigned>(b & ((1u << i) - 1u)));
  }
  return (inv % 2 == 0) ? 1 : -1;
}

std::vector<int> indices_of_mask(uint8_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 8; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

uint8_t mask_of_indices(std::span<const int> idx0) {
  uint8_t m = 0;
  for (int i : idx0) {
    if (i < 0 || i >= 8) throw std::invalid_argument("multi-index out of range");
    if (m & (1u << i)) throw std::invalid_argument("multi-index repeats an axis");
    m |= static_cast<uint8_t>(1u << i);
  }
  return m;
}

}  // namespace combi

// ---------------------------------------------------------------------------
// FormValue algebra
// ---------------------------------------------------------------------------

FormValue& FormValue::operator+=(const FormValue& o) {
  for (int i = 0; i < size(); ++i) c[static_cast<size_t>(i)] += o[i];
  return *this;
}

FormValue& FormValue::operator*=(double s) {
  for (int i = 0; i < size(); ++i) c[static_cast<size_t>(i)] *= s;
  return *this;
}

double FormValue::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, std::abs((*this)[i]));
  return m;
}

namespace {

struct WedgeEntry {
  int16_t rank_a, rank_b, rank_out;
  int8_t sign;
};

// Precomputed split table for wedge at fixed (dim, ka, kb).
const std::vector<WedgeEntry>& wedge_table(int dim, int ka, int kb) {
  static std::map<std::tuple<int, int, int>, std::vector<WedgeEntry>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(dim, ka, kb);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<WedgeEntry> t;
  const auto& ma = combi::masks(dim, ka);
  const auto& mb = combi::masks(dim, kb);
  for (size_t ia = 0; ia < ma.size(); ++ia) {
    for (size_t ib = 0; ib < mb.size(); ++ib) {
      if (ma[ia] & mb[ib]) continue;
      uint8_t out = static_cast<uint8_t>(ma[ia] | mb[ib]);
      t.push_back({static_cast<int16_t>(ia), static_cast<int16_t>(ib),
                   static_cast<int16_t>(combi::rank_of_mask(dim, ka + kb, out)),
                   static_cast<int8_t>(combi::merge_sign(ma[ia], mb[ib]))});
    }
  }
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.dim != b.dim) throw std::invalid_argument("wedge: dimension mismatch");
  FormValue out(a.dim, a.degree + b.degree);
  if (out.degree > out.dim) return out;  // zero object; no coefficients
  for (const WedgeEntry& e : wedge_table(a.dim, a.degree, b.degree))
    out[e.rank_out] += e.sign * a[e.rank_a] * b[e.rank_b];
  return out;
}

FormValue operator+(FormValue a, const FormValue& b) {
  a += b;
  return a;
}

FormValue operator-(FormValue a, const FormValue& b) {
  for (int i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

FormValue operator*(double s, FormValue a) {
  a *= s;
  return a;
}

FormValue pullback_value(const FormValue& v, const Mat& jac, int source_dim) {
  const int k = v.degree;
  FormValue out(source_dim, k);
  if (k > source_dim) return out;
  if (k == 0) {
    out[0] = v[0];
    return out;
  }
  const auto& tmasks = combi::masks(v.dim, k);
  const auto& smasks = combi::masks(source_dim, k);
  for (size_t rs = 0; rs < smasks.size(); ++rs) {
    auto scol = combi::indices_of_mask(smasks[rs]);
    double acc = 0.0;
    for (size_t rt = 0; rt < tmasks.size(); ++rt) {
      double coeff = v[static_cast<int>(rt)];
      if (coeff == 0.0) continue;
      auto trow = combi::indices_of_mask(tmasks[rt]);
      Mat minor(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          minor(r, c) = jac(trow[static_cast<size_t>(r)], scol[static_cast<size_t>(c)]);
      acc += coeff * minor.det();
    }
    out[static_cast<int>(rs)] = acc;
  }
  return out;
}

FormMatrix::FormMatrix(int r, int d, int k) : rank(r), dim(d), degree(k) {
  for (int i = 0; i < r * r; ++i) m[static_cast<size_t>(i)] = FormValue(d, k);
}

double FormMatrix::antisymmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      FormValue s = (*this)(i, j) + (*this)(j, i);
      worst = std::max(worst, s.max_abs());
    }
  return worst;
}

// ---------------------------------------------------------------------------
// SmoothMap
// ---------------------------------------------------------------------------

Vec SmoothMap::operator()(const Point& p) const { return value(source.wrap(p)); }

Mat SmoothMap::jacobian(const Point& p) const {
  if (jacobian_analytic) return jacobian_analytic(source.wrap(p));
  Mat J(target_dim, source.dim());
  const double h = fd.step;
  for (int a = 0; a < source.dim(); ++a) {
    Point pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    Vec vp = (*this)(pp), vm = (*this)(pm);
    for (int r = 0; r < target_dim; ++r) J(r, a) = (vp[r] - vm[r]) / (2.0 * h);
  }
  return J;
}

// ---------------------------------------------------------------------------
// KForm
// ---------------------------------------------------------------------------

KForm KForm::zero(const ChartDomain& dom, int degree) {
  KForm f;
  f.dom_ = dom;
  f.deg_ = degree;
  f.zero_ = true;
  return f;
}

KForm KForm::from_coefficients(
    const ChartDomain& dom, int degree,
    std::vector<std::pair<std::vector<int>, ScalarField>> coeffs) {
  if (degree < 0) throw std::invalid_argument("negative form degree");
  if (degree > dom.dim() || coeffs.empty()) return zero(dom, degree);

  struct Entry {
    int rank;
    ScalarField f;
  };
  auto entries = std::make_shared<std::vector<Entry>>();
  for (auto& [idx1, f] : coeffs) {
    if (static_cast<int>(idx1.size()) != degree)
      throw std::invalid_argument("multi-index length != degree");
    std::vector<int> idx0;
    for (size_t i = 0; i < idx1.size(); ++i) {
      if (i > 0 && idx1[i] <= idx1[i - 1])
        throw std::invalid_argument("multi-index must be strictly increasing");
      if (idx1[i] < 1 || idx1[i] > dom.dim())
        throw std::invalid_argument("multi-index axis out of range");
      idx0.push_back(idx1[i] - 1);
    }
    uint8_t m = combi::mask_of_indices(idx0);
    entries->push_back({combi::rank_of_mask(dom.dim(), degree, m), std::move(f)});
  }

  KForm out;
  out.dom_ = dom;
  out.deg_ = degree;
  out.zero_ = false;
  int d = dom.dim();
  out.eval_ = [entries, d, degree](const Point& p) {
    FormValue v(d, degree);
    for (const Entry& e : *entries) v[e.rank] += e.f(p);
    return v;
  };
  return out;
}

KForm KForm::from_pointwise(const ChartDomain& dom, int degree,
                            std::function<FormValue(const Point&)> eval) {
  if (degree > dom.dim()) return zero(dom, degree);
  KForm out;
  out.dom_ = dom;
  out.deg_ = degree;
  out.zero_ = false;
  out.eval_ = std::move(eval);
  return out;
}

FormValue KForm::value_at(const Point& p) const {
  if (zero_) return FormValue(dom_.dim(), deg_);
  return eval_(dom_.wrap(p));
}

double KForm::coefficient(std::span<const int> idx1, const Point& p) const {
  std::vector<int> idx0;
  for (int i : idx1) idx0.push_back(i - 1);
  uint8_t m = combi::mask_of_indices(idx0);
  if (deg_ > dom_.dim()) return 0.0;
  return value_at(p)[combi::rank_of_mask(dom_.dim(), deg_, m)];
}

double KForm::apply(const Point& p, std::span<const Vec> vectors) const {
  if (static_cast<int>(vectors.size()) != deg_)
    throw std::invalid_argument("apply: wrong number of tangent vectors");
  if (zero_ || deg_ > dom_.dim()) return 0.0;
  FormValue v = value_at(p);
  double total = 0.0;
  const auto& ms = combi::masks(dom_.dim(), deg_);
  for (size_t r = 0; r < ms.size(); ++r) {
    auto idx = combi::indices_of_mask(ms[r]);
    Mat sub(deg_, deg_);
    for (int row = 0; row < deg_; ++row)
      for (int col = 0; col < deg_; ++col)
        sub(row, col) = vectors[static_cast<size_t>(col)][idx[static_cast<size_t>(row)]];
    total += v[static_cast<int>(r)] * sub.det();
  }
  return total;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (!a.domain().same_as(b.domain()))
    throw std::invalid_argument("incompatible chart domains");
  int deg = a.degree() + b.degree();
  if (a.is_zero() || b.is_zero() || deg > a.domain().dim())
    return KForm::zero(a.domain(), deg);
  KForm av = a, bv = b;
  return KForm::from_pointwise(a.domain(), deg, [av, bv](const Point& p) {
    return wedge(av.value_at(p), bv.value_at(p));
  });
}

KForm exterior_derivative(const KForm& a, const FdConfig& fd) {
  int deg = a.degree() + 1;
  if (a.is_zero() || a.degree() >= a.domain().dim())
    return KForm::zero(a.domain(), deg);

  KForm av = a;
  const int dim = a.domain().dim();
  const int k = a.degree();
  const double h = fd.step;
  return KForm::from_pointwise(a.domain(), deg, [av, dim, k, h](const Point& p) {
    FormValue out(dim, k + 1);
    const auto& in_masks = combi::masks(dim, k);
    for (int axis = 0; axis < dim; ++axis) {
      Point pp = p, pm = p;
      pp[axis] += h;
      pm[axis] -= h;
      FormValue vp = av.value_at(pp), vm = av.value_at(pm);
      uint8_t axis_mask = static_cast<uint8_t>(1u << axis);
      for (size_t r = 0; r < in_masks.size(); ++r) {
        if (in_masks[r] & axis_mask) continue;
        double deriv = (vp[static_cast<int>(r)] - vm[static_cast<int>(r)]) / (2.0 * h);
        uint8_t out_mask = static_cast<uint8_t>(in_masks[r] | axis_mask);
        int sign = combi::merge_sign(axis_mask, in_masks[r]);
        out[combi::rank_of_mask(dim, k + 1, out_mask)] += sign * deriv;
      }
    }
    return out;
  });
}

KForm pullback(const KForm& a, const SmoothMap& f) {
  if (f.target_dim != a.domain().dim())
    throw std::invalid_argument("pullback: map target dimension does not match form domain");
  int k = a.degree();
  if (a.is_zero() || k > f.source.dim()) return KForm::zero(f.source, k);

  KForm av = a;
  SmoothMap fv = f;
  const int sdim = f.source.dim();
  const int tdim = f.target_dim;
  return KForm::from_pointwise(f.source, k, [av, fv, sdim, tdim, k](const Point& p) {
    Vec q = fv(p);
    Point pq(tdim);
    for (int i = 0; i < tdim; ++i) pq[i] = q[i];
    FormValue v = av.value_at(pq);
    if (k == 0) {
      FormValue out(sdim, 0);
      out[0] = v[0];
      return out;
    }
    return pullback_value(v, fv.jacobian(p), sdim);
  });
}

KForm operator+(const KForm& a, const KForm& b) {
  if (!a.domain().same_as(b.domain()))
    throw std::invalid_argument("incompatible chart domains");
  if (a.degree() != b.degree())
    throw std::invalid_argument("sum of forms of different degree");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  KForm av = a, bv = b;
  return KForm::from_pointwise(a.domain(), a.degree(), [av, bv](const Point& p) {
    return av.value_at(p) + bv.value_at(p);
  });
}

KForm operator*(double s, const KForm& a) {
  if (a.is_zero()) return a;
  KForm av = a;
  return KForm::from_pointwise(a.domain(), a.degree(),
                               [av, s](const Point& p) { return s * av.value_at(p); });
}

}  // namespace transgress
