#pragma once

// Independent reference implementations used only by tests. Each avoids the
// library code path it checks: trial division instead of sieving, outcome
// enumeration instead of convolution, plain term-by-term sums instead of
// recurrences.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "adlab/psi.hpp"

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= x; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// f(n) by factorization; fp evaluates f on primes.
inline double additive_value(std::uint64_t n, const std::function<double(std::uint64_t)>& fp) {
  double s = 0.0;
  for (const auto p : distinct_prime_factors(n)) s += fp(p);
  return s;
}

// P(sum w_i X_i >= t) by enumerating all 2^k outcomes.
inline double enumerate_tail(const std::vector<std::uint64_t>& primes, const std::vector<double>& w, double t) {
  const std::size_t k = primes.size();
  long double total = 0.0L;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    long double prob = 1.0L;
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const long double q = 1.0L / static_cast<long double>(primes[i]);
      if (mask >> i & 1U) {
        prob *= q;
        value += w[i];
      } else {
        prob *= 1.0L - q;
      }
    }
    if (value >= t - 1e-9 * std::max(1.0, std::fabs(t))) total += prob;
  }
  return static_cast<double>(total);
}

// sum_{k >= ceil(thr)} e^{-lambda} lambda^k / k!, summed from k = 0 in long double.
inline double poisson_tail_naive(double lambda, double delta) {
  const double thr = lambda + delta * std::sqrt(lambda);
  const long double lam = lambda;
  long double below = 0.0L;
  long double above = 0.0L;
  const long double kmax = lam + 60.0L * std::sqrt(lam + 1.0L) + 60.0L;
  for (long double k = 0.0L; k <= kmax; k += 1.0L) {
    const long double pmf = std::exp(-lam + k * std::log(lam) - std::lgamma(k + 1.0L));
    if (k >= thr - 1e-12 * std::max(1.0, std::fabs(thr))) {
      above += pmf;
    } else {
      below += pmf;
    }
  }
  return static_cast<double>(above < below ? above : 1.0L - below);
}

// Random purely atomic law with n atoms in (0, tmax], masses bounded away from 0.
inline adlab::PsiDistribution random_atomic_psi(std::mt19937_64& rng, int n, double tmax = 3.0) {
  std::uniform_real_distribution<double> pos(0.05, tmax);
  std::uniform_real_distribution<double> wt(0.2, 1.0);
  std::vector<adlab::PsiDistribution::Atom> atoms;
  std::vector<double> ts;
  while (static_cast<int>(ts.size()) < n) {
    const double t = pos(rng);
    bool clash = false;
    for (const double u : ts) clash = clash || std::fabs(u - t) < 1e-3;
    if (!clash) ts.push_back(t);
  }
  long double total = 0.0L;
  std::vector<double> m;
  for (int i = 0; i < n; ++i) {
    m.push_back(wt(rng));
    total += m.back();
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mass = i + 1 < n ? static_cast<double>(m[i] / total) : 1.0 - acc;
    acc += mass;
    atoms.push_back({ts[static_cast<std::size_t>(i)], mass});
  }
  return adlab::PsiDistribution::from_atoms(std::move(atoms));
}

inline std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace oracle
