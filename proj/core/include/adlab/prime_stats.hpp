#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adlab/additive_function.hpp"

namespace adlab {

// Prime-side moments of f up to x:
//   mu     = sum f(p)/p
//   sigma2 = sum f(p)^2/p * (1 - 1/p)
//   B2     = sum f(p)^2/p
struct PrimeStats {
  std::uint64_t x = 0;
  std::uint64_t pi_x = 0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double B2 = 0.0;
  double loglog_x = 0.0;

  double sigma() const;
  double B() const;
};

// x >= 3. Sums are compensated and taken in ascending p.
PrimeStats prime_stats(const AdditiveFunction& f, std::uint64_t x);

// Statistics at every point of an ascending grid in a single sieve pass.
std::vector<PrimeStats> prime_stats_grid(const AdditiveFunction& f, std::span<const std::uint64_t> xs);

struct PrimeCdf {
  std::vector<double> t;
  std::vector<double> F;  // (1/pi(x)) #{p <= x : f(p) <= t}
  std::vector<double> K;  // (1/B^2) sum_{p <= x, f(p) <= t} f(p)^2/p
};

PrimeCdf prime_cdf(const AdditiveFunction& f, std::uint64_t x, std::span<const double> t_grid);

// Power sums sum_{p <= x} f(p)^k / p for k = 0..max_power.
std::vector<double> prime_power_sums(const AdditiveFunction& f, std::uint64_t x, int max_power);

}  // namespace adlab
