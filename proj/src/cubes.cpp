#include "transgress/cubes.hpp"

#include <cmath>
#include <random>

namespace transgress {

namespace {

struct TrigCoeff {
  double offset, amp;
  Vec freq;
  double phase;

  double operator()(const Point& p) const {
    double arg = phase;
    for (int a = 0; a < p.size(); ++a) arg += freq[a] * p[a];
    return offset + amp * std::sin(arg);
  }
};

TrigCoeff random_trig(std::mt19937_64& rng, int dim, double amp_scale) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 6.28318);
  TrigCoeff t;
  t.offset = amp_scale * unit(rng);
  t.amp = amp_scale * unit(rng);
  t.freq = Vec(dim);
  for (int a = 0; a < dim; ++a) t.freq[a] = 2.0 * unit(rng);
  t.phase = angle(rng);
  return t;
}

}  // namespace

CubeCase make_synthetic_cube(int n, bool stabilized_shape, uint64_t seed, double fd_step) {
  if (n < 1 || n > 3) throw std::invalid_argument("synthetic cubes support n in {1,2,3}");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale_dist(0.1, 0.3);
  std::uniform_real_distribution<double> center_dist(0.3, 0.7);

  const int rank = n + 1;
  const int dim = n + 1;
  const double scale = scale_dist(rng);

  std::vector<Interval> bounds;
  for (int a = 0; a < dim; ++a) {
    double c = center_dist(rng);
    bounds.push_back({c - 0.5 * scale, c + 0.5 * scale});
  }
  ChartDomain box(dim, bounds);

  // connection entries: one trig coefficient per axis, strictly lower
  // triangle, mirrored antisymmetrically
  const int first = stabilized_shape ? 1 : 0;
  std::vector<std::vector<std::vector<TrigCoeff>>> coeffs(
      static_cast<size_t>(rank),
      std::vector<std::vector<TrigCoeff>>(static_cast<size_t>(rank)));
  for (int i = first; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      for (int a = 0; a < dim; ++a)
        coeffs[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back(
            random_trig(rng, dim, 0.6));

  FormMatrixField omega = [coeffs, rank, dim, first](const Point& p) {
    FormMatrix w(rank, dim, 1);
    for (int i = first; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j)
        for (int a = 0; a < dim; ++a) {
          double v = coeffs[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(a)](p);
          w(i, j)[a] = v;
          w(j, i)[a] = -v;
        }
    return w;
  };

  CubeCase out;
  out.scale = scale;
  out.map.conn.rank = rank;
  out.map.conn.chart = box;
  out.map.conn.omega = omega;
  out.map.conn.curvature = curvature_from_connection(omega, box, rank, fd_step);

  // unit map: normalized trig vector, resampled until safely nonzero
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<TrigCoeff> w_coeffs;
    for (int i = 0; i < rank; ++i) w_coeffs.push_back(random_trig(rng, dim, 0.8));
    auto raw = [w_coeffs, rank](const Point& p) {
      Vec v(rank);
      for (int i = 0; i < rank; ++i) v[i] = w_coeffs[static_cast<size_t>(i)](p);
      return v;
    };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_norm = 1e30;
    for (int s = 0; s < 200; ++s) {
      Point p(dim);
      for (int a = 0; a < dim; ++a) {
        const Interval& b = box.bounds(a);
        p[a] = b.lo + unit(rng) * b.length();
      }
      min_norm = std::min(min_norm, raw(p).norm());
    }
    if (min_norm < 0.3) continue;
    out.map.u.source = box;
    out.map.u.target_dim = rank;
    out.map.u.value = [raw](const Point& p) { return raw(p).normalized(); };
    out.map.u.fd.step = fd_step;
    return out;
  }
  throw std::runtime_error("failed to draw a nonvanishing unit map");
}

}  // namespace transgress
