#pragma once

// Coordinate exterior calculus on rectangular chart domains: differential
// forms stored as coefficient evaluators over increasing multi-indices,
// wedge products, exterior derivative (central differences), and pullback
// along smooth maps.

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace transgress {

inline constexpr int kMaxDim = 6;          // charts, cube sources, fibre ranks
inline constexpr int kMaxFormCoeffs = 20;  // C(6,3), largest coefficient count

// Fixed-capacity numeric vector. Used both for chart points and for
// component vectors (sections, field values).
struct Vec {
  std::array<double, kMaxDim> x{};
  int n = 0;

  Vec() = default;
  explicit Vec(int size) : n(size) {}
  Vec(std::initializer_list<double> v) : n(static_cast<int>(v.size())) {
    int i = 0;
    for (double d : v) x[static_cast<size_t>(i++)] = d;
  }

  double& operator[](int i) { return x[static_cast<size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<size_t>(i)]; }
  int size() const { return n; }

  double norm() const;
  double dot(const Vec& o) const;
  Vec normalized() const;

  Vec operator+(const Vec& o) const;
  Vec operator-(const Vec& o) const;
  Vec operator*(double s) const;
};

using Point = Vec;

// Small dense matrix, rows/cols <= kMaxDim.
struct Mat {
  std::array<double, kMaxDim * kMaxDim> a{};
  int rows = 0, cols = 0;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c) {}
  static Mat identity(int d);

  double& operator()(int r, int c) { return a[static_cast<size_t>(r * cols + c)]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r * cols + c)]; }

  Mat transposed() const;
  Vec apply(const Vec& v) const;  // rows x cols times cols-vector
  Mat mul(const Mat& o) const;
  double det() const;             // square, dim <= 4
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vec(const Point&)>;
using MatrixField = std::function<Mat(const Point&)>;

struct Interval {
  double lo = 0.0, hi = 1.0;
  double length() const { return hi - lo; }
};

struct FdConfig {
  double step = 1e-5;  // central-difference step, O(h^2) truncation
};

// ---------------------------------------------------------------------------
// ChartDomain: a rectangular coordinate patch. Periodic axes identify their
// endpoints; evaluation entry points wrap periodic coordinates first.
// ---------------------------------------------------------------------------
class ChartDomain {
 public:
  ChartDomain() = default;
  ChartDomain(int dim, std::vector<Interval> bounds, std::vector<bool> periodic = {});

  int dim() const { return dim_; }
  const Interval& bounds(int axis) const { return bounds_[static_cast<size_t>(axis)]; }
  bool periodic(int axis) const { return periodic_[static_cast<size_t>(axis)]; }

  Point wrap(const Point& p) const;
  Point center() const;
  bool same_as(const ChartDomain& o) const;

 private:
  int dim_ = 0;
  std::array<Interval, kMaxDim> bounds_{};
  std::array<bool, kMaxDim> periodic_{};
};

// ---------------------------------------------------------------------------
// Increasing multi-indices as bitmasks over axes {0, .., dim-1}, ranked in
// lexicographic order of the index sequences.
// ---------------------------------------------------------------------------
namespace combi {

int binomial(int n, int k);
// Masks of all k-subsets of {0..dim-1} in lexicographic order.
const std::vector<uint8_t>& masks(int dim, int k);
int rank_of_mask(int dim, int k, uint8_t mask);
// Sign of merging two disjoint increasing index sets (count of inversions).
int merge_sign(uint8_t a, uint8_t b);
std::vector<int> indices_of_mask(uint8_t mask);  // ascending, 0-based
uint8_t mask_of_indices(std::span<const int> idx0);

}  // namespace combi

// ---------------------------------------------------------------------------
// FormValue: the value of a degree-k form at one point, as coefficients over
// increasing multi-indices in combi::masks(dim, k) order.
// ---------------------------------------------------------------------------
struct FormValue {
  int dim = 0, degree = 0;
  std::array<double, kMaxFormCoeffs> c{};

  FormValue() = default;
  FormValue(int d, int k) : dim(d), degree(k) {}

  int size() const { return combi::binomial(dim, degree); }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  FormValue& operator+=(const FormValue& o);
  FormValue& operator*=(double s);
  double max_abs() const;
};

FormValue wedge(const FormValue& a, const FormValue& b);
FormValue operator+(FormValue a, const FormValue& b);
FormValue operator-(FormValue a, const FormValue& b);
FormValue operator*(double s, FormValue a);

// Pull a form value back through a linear map with the given Jacobian
// (target_dim x source_dim): minor-determinant contraction.
FormValue pullback_value(const FormValue& v, const Mat& jac, int source_dim);

// Antisymmetric matrix of form values (connection and curvature entries).
struct FormMatrix {
  int rank = 0;
  int dim = 0, degree = 0;
  std::array<FormValue, 16> m{};

  FormMatrix() = default;
  FormMatrix(int r, int d, int k);

  FormValue& operator()(int i, int j) { return m[static_cast<size_t>(i * rank + j)]; }
  const FormValue& operator()(int i, int j) const {
    return m[static_cast<size_t>(i * rank + j)];
  }
  double antisymmetry_defect() const;  // max |m_ij + m_ji|
};

using FormMatrixField = std::function<FormMatrix(const Point&)>;

// ---------------------------------------------------------------------------
// SmoothMap: chart domain -> R^target_dim with a Jacobian strategy.
// ---------------------------------------------------------------------------
struct SmoothMap {
  ChartDomain source;
  int target_dim = 0;
  VectorField value;
  MatrixField jacobian_analytic;  // optional; target_dim x source.dim
  FdConfig fd{};

  Vec operator()(const Point& p) const;
  Mat jacobian(const Point& p) const;
};

// ---------------------------------------------------------------------------
// KForm: a degree-k differential form on a chart domain. Coefficients are
// lazy evaluators; all-zero forms canonicalize to an explicit zero object.
// Forms of degree > dim exist only as the zero object.
// ---------------------------------------------------------------------------
class KForm {
 public:
  KForm() = default;

  static KForm zero(const ChartDomain& dom, int degree);
  // coeffs: (increasing 1-based multi-index, evaluator) pairs; absent
  // indices mean coefficient zero.
  static KForm from_coefficients(
      const ChartDomain& dom, int degree,
      std::vector<std::pair<std::vector<int>, ScalarField>> coeffs);
  static KForm from_pointwise(const ChartDomain& dom, int degree,
                              std::function<FormValue(const Point&)> eval);

  const ChartDomain& domain() const { return dom_; }
  int degree() const { return deg_; }
  bool is_zero() const { return zero_; }

  // Full coefficient vector at a point (periodic axes wrapped first).
  FormValue value_at(const Point& p) const;
  // One coefficient, increasing 1-based multi-index.
  double coefficient(std::span<const int> idx1, const Point& p) const;
  // Alternating multilinear evaluation on k tangent vectors.
  double apply(const Point& p, std::span<const Vec> vectors) const;

 private:
  ChartDomain dom_;
  int deg_ = 0;
  bool zero_ = true;
  std::function<FormValue(const Point&)> eval_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm exterior_derivative(const KForm& a, const FdConfig& fd = {});
KForm pullback(const KForm& a, const SmoothMap& f);

KForm operator+(const KForm& a, const KForm& b);
KForm operator*(double s, const KForm& a);

}  // namespace transgress
