#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adlab/additive_function.hpp"
#include "adlab/model.hpp"
#include "adlab/psi.hpp"

namespace adlab {

inline constexpr int kMaxCoefficientOrder = 24;

enum class CoefficientKind { kLambdaF, kLambdaPsi };
const char* to_string(CoefficientKind k) noexcept;

// lambda_0 = 0, lambda_1 = 1; growth_bound = max_k |lambda_k|^{1/k}.
struct CoefficientVector {
  CoefficientKind kind = CoefficientKind::kLambdaF;
  std::vector<double> values;
  double growth_bound = 1.0;

  int K() const noexcept { return static_cast<int>(values.size()) - 1; }
};

// M(l) = B^{-2} sum_p w^{l+2}/p for l = 0..L; M(0) = 1 exactly.
std::vector<double> moment_sequence(const BernoulliEnsemble& ens, int L);
std::vector<double> moment_sequence(const AdditiveFunction& f, std::uint64_t x, int L);

// Coefficients of the compositional inverse of z + sum_{i>=2} c_{i-1} z^i / i!,
// where c[l] is the l-th normalized moment (c[0] = 1). Computed through the
// recursion lambda_j = -sum_{i=2}^{j} c_{i-1}/i! [z^j] G(z)^i with convolution
// powers of G memoized. order <= 32.
std::vector<double> lambda_recursion(std::span<const double> c, int order);

// K <= 24, else ResourceError.
CoefficientVector lambda_f(const BernoulliEnsemble& ens, int K);
CoefficientVector lambda_f(const AdditiveFunction& f, std::uint64_t x, int K);
CoefficientVector lambda_psi(const PsiDistribution& psi, int K);

// Series reversion of u'(z) = sum_{l>=1} u1[l] z^l by Lagrange inversion.
// u1[0] must be 0; u1[1] == 0 is a DomainError.
std::vector<double> reversion_oracle(std::span<const double> u1, int K);

struct SeriesTail {
  double value = 0.0;
  double log_value = 0.0;
  double exponent = 0.0;         // -(delta^3/B) sum_{k<=K} lambda_{k+2}/(k+3) (delta/B)^k
  double ratio = 0.0;            // delta / B
  double remainder_bound = 0.0;  // relative bound on the omitted terms
  int K = 0;
  double growth = 1.0;
};

// exp(exponent) normal_tail(delta). Uses lambda_2..lambda_{K+2} of lambda,
// so lambda.values needs K + 3 entries. delta / B <= 1 / (2 C), else DomainError.
SeriesTail series_tail(const CoefficientVector& lambda, double B, double delta, int K);
SeriesTail series_tail(const BernoulliEnsemble& ens, double B, double delta, int K);
SeriesTail series_tail(const PsiDistribution& psi, double B, double delta, int K);

struct TransferCheck {
  std::uint64_t x = 0;
  double delta = 0.0;
  double mu = 0.0;
  double B = 0.0;
  double sigma = 0.0;
  double threshold_B = 0.0;      // mu + delta B
  double threshold_sigma = 0.0;  // mu + (delta B / sigma) sigma
  std::uint64_t count_B = 0;
  std::uint64_t count_sigma = 0;
  double D_B = 0.0;
  double D_sigma = 0.0;
  double series_B = 0.0;
  double series_sigma = 0.0;
  double series_ratio = 0.0;  // series_B / series_sigma
  double B2_minus_sigma2 = 0.0;
  double sum_f2_over_p2 = 0.0;
};

TransferCheck transfer_check(const AdditiveFunction& f, std::uint64_t x, double delta, int K = 12);

}  // namespace adlab
