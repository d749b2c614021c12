#include "adlab/special.hpp"

#include <cmath>

namespace adlab {

double normal_tail(double delta) { return 0.5 * std::erfc(delta * 0.70710678118654752440); }

double log_normal_tail(double delta) {
  if (delta < 37.0) return std::log(normal_tail(delta));
  // Mills-ratio asymptotic series sum_k (-1)^k (2k-1)!! / delta^{2k}; at
  // delta >= 37 the twelfth term is below 1e-26.
  const double inv2 = 1.0 / (delta * delta);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    series += term;
  }
  return -0.5 * delta * delta - std::log(delta) - 0.5 * std::log(2.0 * kPi) + std::log(series);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace adlab
