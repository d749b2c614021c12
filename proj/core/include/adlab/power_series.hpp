#pragma once

#include <span>
#include <vector>

namespace adlab::series {

// Truncated power series c[0] + c[1] z + ... + c[K] z^K.
using Series = std::vector<double>;

Series multiply(std::span<const double> a, std::span<const double> b, int order);

// 1 / a, requires a[0] != 0.
Series reciprocal(std::span<const double> a, int order);

// outer(inner(z)), requires inner[0] == 0.
Series compose(std::span<const double> outer, std::span<const double> inner, int order);

// Compositional inverse g with f(g(z)) = z, by Lagrange inversion:
// [z^n] g = (1/n) [w^{n-1}] (w / f(w))^n. Requires f[0] == 0, f[1] != 0.
Series revert(std::span<const double> f, int order);

}  // namespace adlab::series
