#include "adlab/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "adlab/empirical.hpp"
#include "adlab/error.hpp"
#include "adlab/power_series.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/sieve.hpp"
#include "adlab/special.hpp"
#include "adlab/summation.hpp"

namespace adlab {

namespace {

constexpr int kMaxInternalOrder = 32;

void check_public_order(int K) {
  if (K < 1) throw DomainError("coefficient order K must be >= 1");
  if (K > kMaxCoefficientOrder) {
    throw ResourceError("coefficient order K=" + std::to_string(K) + " exceeds the supported maximum of " +
                        std::to_string(kMaxCoefficientOrder));
  }
}

double growth_of(const std::vector<double>& v) {
  double g = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] != 0.0) g = std::max(g, std::pow(std::fabs(v[k]), 1.0 / static_cast<double>(k)));
  }
  return g;
}

CoefficientVector make_vector(CoefficientKind kind, std::span<const double> c, int order) {
  CoefficientVector out;
  out.kind = kind;
  out.values = lambda_recursion(c, order);
  out.growth_bound = growth_of(out.values);
  return out;
}

std::vector<double> psi_moments(const PsiDistribution& psi, int L) {
  std::vector<double> c(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) c[static_cast<std::size_t>(l)] = moment(psi, l);
  return c;
}

}  // namespace

const char* to_string(CoefficientKind k) noexcept {
  return k == CoefficientKind::kLambdaF ? "LAMBDA_F" : "LAMBDA_PSI";
}

std::vector<double> moment_sequence(const BernoulliEnsemble& ens, int L) {
  if (L < 0 || L > kMaxCoefficientOrder + 2) throw DomainError("moment_sequence: L out of range");
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(L) + 1);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double w = ens.weights()[i];
    double term = w * w / static_cast<double>(ens.primes()[i]);
    for (int l = 0; l <= L; ++l) {
      sums[static_cast<std::size_t>(l)].add(term);
      term *= w;
    }
  }
  const double B2 = sums[0].value();
  if (!(B2 > 0.0)) throw DomainError("moment_sequence: B^2 must be > 0");
  std::vector<double> M(static_cast<std::size_t>(L) + 1);
  M[0] = 1.0;
  for (int l = 1; l <= L; ++l) M[static_cast<std::size_t>(l)] = sums[static_cast<std::size_t>(l)].value() / B2;
  return M;
}

std::vector<double> moment_sequence(const AdditiveFunction& f, std::uint64_t x, int L) {
  if (L < 0 || L > kMaxCoefficientOrder + 2) throw DomainError("moment_sequence: L out of range");
  const auto s = prime_power_sums(f, x, L + 2);
  const double B2 = s[2];
  if (!(B2 > 0.0)) throw DomainError("moment_sequence: B^2 must be > 0");
  std::vector<double> M(static_cast<std::size_t>(L) + 1);
  M[0] = 1.0;
  for (int l = 1; l <= L; ++l) M[static_cast<std::size_t>(l)] = s[static_cast<std::size_t>(l) + 2] / B2;
  return M;
}

std::vector<double> lambda_recursion(std::span<const double> c, int order) {
  if (order < 1 || order > kMaxInternalOrder) throw DomainError("lambda_recursion: order must be in [1, 32]");
  if (c.size() < static_cast<std::size_t>(order)) throw DomainError("lambda_recursion: need c_0..c_{order-1}");
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> lambda(n, 0.0);
  lambda[1] = 1.0;
  // pw[i][j] = [z^j] G(z)^i; zero for j < i since lambda_0 = 0.
  std::vector<std::vector<double>> pw(n, std::vector<double>(n, 0.0));
  pw[1][1] = 1.0;
  std::array<double, kMaxInternalOrder + 1> inv_fact{};
  inv_fact[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) inv_fact[i] = inv_fact[i - 1] / static_cast<double>(i);

  for (std::size_t j = 2; j < n; ++j) {
    for (std::size_t i = 2; i <= j; ++i) {
      CompensatedSum s;
      for (std::size_t k = 1; k + (i - 1) <= j; ++k) s.add(lambda[k] * pw[i - 1][j - k]);
      pw[i][j] = s.value();
    }
    CompensatedSum s;
    for (std::size_t i = 2; i <= j; ++i) s.add(-inv_fact[i] * c[i - 1] * pw[i][j]);
    lambda[j] = s.value();
    pw[1][j] = lambda[j];
  }
  return lambda;
}

CoefficientVector lambda_f(const BernoulliEnsemble& ens, int K) {
  check_public_order(K);
  const auto M = moment_sequence(ens, K);
  return make_vector(CoefficientKind::kLambdaF, M, K);
}

CoefficientVector lambda_f(const AdditiveFunction& f, std::uint64_t x, int K) {
  check_public_order(K);
  const auto M = moment_sequence(f, x, K);
  return make_vector(CoefficientKind::kLambdaF, M, K);
}

CoefficientVector lambda_psi(const PsiDistribution& psi, int K) {
  check_public_order(K);
  return make_vector(CoefficientKind::kLambdaPsi, psi_moments(psi, K), K);
}

std::vector<double> reversion_oracle(std::span<const double> u1, int K) {
  if (K < 1 || K > kMaxInternalOrder) throw DomainError("reversion_oracle: K must be in [1, 32]");
  if (u1.size() < 2) throw DomainError("reversion_oracle: need at least the linear coefficient");
  if (u1[0] != 0.0) throw DomainError("reversion_oracle: constant term must be 0");
  if (u1[1] == 0.0) throw DomainError("reversion_oracle: linear coefficient is 0, series is not invertible");
  std::vector<double> f(static_cast<std::size_t>(K) + 1, 0.0);
  std::copy_n(u1.begin(), std::min(u1.size(), f.size()), f.begin());
  return series::revert(f, K);
}

SeriesTail series_tail(const CoefficientVector& lambda, double B, double delta, int K) {
  if (K < 0 || K > kMaxCoefficientOrder) {
    throw ResourceError("series_tail: K must be in [0, " + std::to_string(kMaxCoefficientOrder) + "]");
  }
  if (lambda.values.size() < static_cast<std::size_t>(K) + 3) {
    throw DomainError("series_tail: need lambda_0..lambda_{K+2}");
  }
  if (!(B > 0.0)) throw DomainError("series_tail: B must be > 0");
  if (!(delta >= 0.0)) throw DomainError("series_tail: delta must be >= 0");
  SeriesTail out;
  out.K = K;
  out.growth = lambda.growth_bound;
  out.ratio = delta / B;
  const double C = lambda.growth_bound;
  if (out.ratio > 1.0 / (2.0 * C)) {
    throw DomainError("series_tail: delta/B = " + std::to_string(out.ratio) +
                      " lies outside the radius 1/(2C) = " + std::to_string(1.0 / (2.0 * C)));
  }
  double poly = 0.0;
  for (int k = K; k >= 0; --k) {
    poly = poly * out.ratio + lambda.values[static_cast<std::size_t>(k) + 2] / static_cast<double>(k + 3);
  }
  const double scale = delta * delta * delta / B;
  out.exponent = -scale * poly;
  out.log_value = out.exponent + log_normal_tail(delta);
  out.value = std::exp(out.log_value);
  // |lambda_k| <= C^k bounds the omitted terms by C^2 (C r)^{K+1} / (1 - C r).
  const double cr = C * out.ratio;
  out.remainder_bound = std::expm1(scale * C * C * std::pow(cr, K + 1) / (1.0 - cr));
  return out;
}

SeriesTail series_tail(const BernoulliEnsemble& ens, double B, double delta, int K) {
  if (K < 0 || K > kMaxCoefficientOrder) throw ResourceError("series_tail: K out of range");
  const auto M = moment_sequence(ens, K + 2);
  return series_tail(make_vector(CoefficientKind::kLambdaF, M, K + 2), B, delta, K);
}

SeriesTail series_tail(const PsiDistribution& psi, double B, double delta, int K) {
  if (K < 0 || K > kMaxCoefficientOrder) throw ResourceError("series_tail: K out of range");
  return series_tail(make_vector(CoefficientKind::kLambdaPsi, psi_moments(psi, K + 2), K + 2), B, delta, K);
}

TransferCheck transfer_check(const AdditiveFunction& f, std::uint64_t x, double delta, int K) {
  TransferCheck out;
  out.x = x;
  out.delta = delta;
  const auto stats = prime_stats(f, x);
  out.mu = stats.mu;
  out.B = stats.B();
  out.sigma = stats.sigma();
  out.threshold_B = stats.mu + delta * out.B;
  out.threshold_sigma = stats.mu + (delta * out.B / out.sigma) * out.sigma;
  std::array<double, 2> thr{out.threshold_B, out.threshold_sigma};
  const bool swapped = thr[1] < thr[0];
  if (swapped) std::swap(thr[0], thr[1]);
  const auto counts = tail_counts(f, x, thr);
  out.count_B = swapped ? counts[1] : counts[0];
  out.count_sigma = swapped ? counts[0] : counts[1];
  out.D_B = static_cast<double>(out.count_B) / static_cast<double>(x);
  out.D_sigma = static_cast<double>(out.count_sigma) / static_cast<double>(x);

  const auto ens = BernoulliEnsemble::from_function(f, x);
  const auto lambda = make_vector(CoefficientKind::kLambdaF, moment_sequence(ens, K + 2), K + 2);
  out.series_B = series_tail(lambda, out.B, delta, K).value;
  out.series_sigma = series_tail(lambda, out.sigma, delta, K).value;
  out.series_ratio = out.series_B / out.series_sigma;

  out.B2_minus_sigma2 = stats.B2 - stats.sigma2;
  CompensatedSum s;
  for_each_prime(x, [&](std::uint64_t p) {
    const double v = f.at_prime(p);
    const double pd = static_cast<double>(p);
    s.add(v * v / (pd * pd));
  });
  out.sum_f2_over_p2 = s.value();
  return out;
}

}  // namespace adlab
