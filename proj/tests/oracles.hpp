#pragma once

// Test-side oracles, independent of the library's degree/quadrature path.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "transgress/exterior.hpp"

namespace transgress::testing {

// Winding number of f around a circle by unwrapped angle accumulation.
inline int winding_oracle(const std::function<std::complex<double>(std::complex<double>)>& f,
                          std::complex<double> center, double radius, int samples = 4096) {
  double total = 0.0;
  double prev = std::arg(f(center + std::polar(radius, 0.0)));
  for (int k = 1; k <= samples; ++k) {
    double t = 2.0 * std::numbers::pi * k / samples;
    std::complex<double> v = f(center + std::polar(radius, t));
    if (std::abs(v) == 0.0) throw std::runtime_error("winding oracle hit a zero");
    double a = std::arg(v);
    double step = a - prev;
    while (step > std::numbers::pi) step -= 2.0 * std::numbers::pi;
    while (step < -std::numbers::pi) step += 2.0 * std::numbers::pi;
    total += step;
    prev = a;
  }
  double w = total / (2.0 * std::numbers::pi);
  if (std::abs(w - std::round(w)) > 1e-6)
    throw std::runtime_error("winding oracle did not resolve an integer");
  return static_cast<int>(std::round(w));
}

// The planar field z^d (d >= 0) or conj(z)^{|d|} (d < 0) as a real field.
inline VectorField complex_power_field(int d) {
  return [d](const Vec& p) {
    std::complex<double> z(p[0], p[1]);
    std::complex<double> w = (d >= 0) ? std::pow(z, d) : std::pow(std::conj(z), -d);
    return Vec{w.real(), w.imag()};
  };
}

inline std::function<std::complex<double>(std::complex<double>)> complex_power_fn(int d) {
  return [d](std::complex<double> z) {
    return (d >= 0) ? std::pow(z, d) : std::pow(std::conj(z), -d);
  };
}

}  // namespace transgress::testing
