#include "adlab/power_series.hpp"

#include <algorithm>

#include "adlab/error.hpp"

namespace adlab::series {

namespace {

double coeff(std::span<const double> a, int k) {
  return k < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(k)] : 0.0;
}

}  // namespace

Series multiply(std::span<const double> a, std::span<const double> b, int order) {
  Series out(static_cast<std::size_t>(order) + 1, 0.0);
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (a[static_cast<std::size_t>(i)] == 0.0) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) {
      out[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

Series reciprocal(std::span<const double> a, int order) {
  const double a0 = coeff(a, 0);
  if (a0 == 0.0) throw DomainError("series reciprocal: zero constant term");
  Series out(static_cast<std::size_t>(order) + 1, 0.0);
  out[0] = 1.0 / a0;
  for (int n = 1; n <= order; ++n) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += coeff(a, k) * out[static_cast<std::size_t>(n - k)];
    out[static_cast<std::size_t>(n)] = -s / a0;
  }
  return out;
}

Series compose(std::span<const double> outer, std::span<const double> inner, int order) {
  if (coeff(inner, 0) != 0.0) throw DomainError("series compose: inner series must vanish at 0");
  Series out(static_cast<std::size_t>(order) + 1, 0.0);
  // Horner from the top coefficient down.
  for (int k = std::min<int>(order, static_cast<int>(outer.size()) - 1); k >= 0; --k) {
    out = multiply(out, inner, order);
    out[0] += outer[static_cast<std::size_t>(k)];
  }
  return out;
}

Series revert(std::span<const double> f, int order) {
  if (coeff(f, 0) != 0.0) throw DomainError("series revert: constant term must be zero");
  if (coeff(f, 1) == 0.0) throw DomainError("series revert: zero linear coefficient");
  // phi(w) = w / f(w) = 1 / (f1 + f2 w + ...)
  Series shifted(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) shifted[static_cast<std::size_t>(k)] = coeff(f, k + 1);
  const Series phi = reciprocal(shifted, order);

  Series out(static_cast<std::size_t>(order) + 1, 0.0);
  Series power{1.0};
  for (int n = 1; n <= order; ++n) {
    power = multiply(power, phi, order);
    out[static_cast<std::size_t>(n)] = power[static_cast<std::size_t>(n - 1)] / n;
  }
  return out;
}

}  // namespace adlab::series
