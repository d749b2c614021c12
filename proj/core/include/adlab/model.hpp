#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlab/additive_function.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/psi.hpp"

namespace adlab {

// The model sum_p w_p X_p with independent X_p ~ Bernoulli(1/p).
class BernoulliEnsemble {
 public:
  // primes strictly ascending and >= 2; weights finite and >= 0.
  BernoulliEnsemble(std::vector<std::uint64_t> primes, std::vector<double> weights);
  static BernoulliEnsemble from_function(const AdditiveFunction& f, std::uint64_t x);

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return primes_.size(); }

  double mean() const;      // sum w/p
  double variance() const;  // sum w^2/p (1 - 1/p)
  double b2() const;        // sum w^2/p

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<double> weights_;
};

// log E[e^{s Omega}] = sum_p log(1 + (e^{s w_p} - 1)/p), ascending p.
double model_log_mgf(const BernoulliEnsemble& ens, double s);
// E[e^{s Omega}]; RangeError when it overflows a double.
double model_mgf(const BernoulliEnsemble& ens, double s);

enum class TailMethod { kDp, kMc, kClosed };
const char* to_string(TailMethod m) noexcept;

struct TailEstimate {
  double value = 0.0;
  TailMethod method = TailMethod::kClosed;
  std::optional<double> std_error;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_step;
  std::optional<double> remainder_bound;
  std::optional<double> snap_error;
};

struct DpOptions {
  // 0 selects the lattice span of the weights, else kSnapStep with snapping.
  double grid_step = 0.0;
  // Accept weights off the grid; the largest |w - snapped| is reported.
  bool allow_snap = false;
  double lattice_tol = 1e-12;
  std::size_t max_states = 100'000'000;
};

inline constexpr double kSnapStep = 1e-4;

// Distribution of sum w_p X_p on the grid q Z: law[k] = P(Omega = k q).
struct DpLaw {
  double grid_step = 0.0;
  double snap_error = 0.0;
  std::vector<double> law;
};

DpLaw dp_law(const BernoulliEnsemble& ens, DpOptions opts = {});

// P(Omega >= t) by forward convolution with an absorbing top state.
TailEstimate exact_tail_dp(const BernoulliEnsemble& ens, double t, DpOptions opts = {});

// Number of replicates in [first, first + count) with Omega >= t. Replicate r
// uses counter (r_lo, r_hi, block, 0) under key seed, one block per 4 primes,
// so any split of the replicate range gives the same total.
std::uint64_t mc_hits(const BernoulliEnsemble& ens, double t, std::uint64_t seed, std::uint64_t first,
                      std::uint64_t count);

// N >= 1000 replicates; stderr = sqrt(v (1 - v) / N).
TailEstimate mc_tail(const BernoulliEnsemble& ens, double t, std::uint64_t N, std::uint64_t seed);

struct CenteredOptions {
  TailMethod method = TailMethod::kDp;
  DpOptions dp;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
};

// P(sum w_p (X_p - 1/p) >= delta sigma) = P(Omega >= mu + delta sigma).
TailEstimate centered_tail(const BernoulliEnsemble& ens, double delta, const PrimeStats& stats,
                           CenteredOptions opts = {});

struct GHSplit {
  AdditiveFunction g_part;  // integer values (rounded), zero where f(p) is not integral
  AdditiveFunction h_part;  // f(p) where f(p) is not integral, else zero
  std::vector<std::uint64_t> S_h;
};

GHSplit split_gh(const AdditiveFunction& f, std::uint64_t x, double tol = 1e-9);

// Law of X(h) = sum_{p in S} h(p) X_p through the weighted count of S-smooth
// integers: P(X(h) <= t) = prod_{p in S}(1 - 1/p) sum_{n S-smooth, h(n) <= t} 1/n.
class XhLaw {
 public:
  struct Point {
    double value;
    double mass;
  };
  static constexpr std::size_t kMaxPrimes = 12;
  static constexpr std::uint64_t kDefaultNMax = 1'000'000;

  // h(p) > 0 for p in S; primes distinct.
  XhLaw(std::vector<AdditiveFunction::TableEntry> S, std::uint64_t n_max = kDefaultNMax,
        double warn_tol = 1e-9);
  // S = primes <= x with nonzero h(p).
  static XhLaw from_function(const AdditiveFunction& h, std::uint64_t x,
                             std::uint64_t n_max = kDefaultNMax);

  double cdf(double t) const;      // P(X <= t) from the enumerated mass
  double tail_ge(double t) const;  // 1 - P(X < t); 0 above the largest value
  double max_value() const noexcept { return max_value_; }
  // Mass of S-smooth n > N_max, i.e. 1 - prod(1 - 1/p) sum_{n <= N_max} 1/n.
  double remainder() const noexcept { return remainder_; }
  bool precision_warning() const noexcept { return remainder_ > warn_tol_; }
  std::uint64_t enumerated() const noexcept { return enumerated_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<AdditiveFunction::TableEntry>& support_primes() const noexcept { return S_; }

  // log E[e^{s X}] under the exact Bernoulli law on S.
  double log_mgf(double s) const;

 private:
  std::vector<AdditiveFunction::TableEntry> S_;
  std::vector<Point> points_;  // ascending value, merged within 1e-12
  std::vector<double> cum_;    // cum_[i] = sum of masses of points_[0..i]
  double max_value_ = 0.0;
  double remainder_ = 0.0;
  double warn_tol_ = 1e-9;
  std::uint64_t enumerated_ = 0;
};

struct PhFactor {
  double value = 0.0;
  double remainder_bound = 0.0;
  int terms = 0;
  bool precision_warning = false;
};

// P_h(a; v) = v sum_l e^{v(l + {a})} P(X(h) >= l + {a}), 0 < v <= 8. Terms
// l <= -1 are summed in closed form; l runs up to K (default: the largest
// value of X(h)), the rest bounded by a Chernoff estimate.
PhFactor p_h_factor(const XhLaw& law, double a, double v, std::optional<int> K = std::nullopt);

// sum_{k >= lambda + delta sqrt(lambda)} e^{-lambda} lambda^k / k!.
double poisson_tail(double lambda, double delta);

enum class LevyMode { kExactPoisson, kSaddle };

struct LevyTail {
  double value = 0.0;
  double log_value = 0.0;
  double rho = 0.0;  // SADDLE only
  LevyMode mode = LevyMode::kSaddle;
};

// P(Z_Psi(B^2) >= delta B). EXACT_POISSON requires Psi = point mass at 1.
LevyTail levy_tail(const PsiDistribution& psi, double B2, double delta, LevyMode mode);

// u(z) = integral (e^{zt} - zt - 1) t^{-2} dPsi and its first two derivatives.
double levy_u(const PsiDistribution& psi, double z, int order);

// rho > 0 with u'(rho) = target, target >= 0.
double solve_rho(const PsiDistribution& psi, double target);

struct EtaSolution {
  double eta = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// eta > 0 with sum w e^{eta w}/p = mu + delta B. delta > 0.
EtaSolution eta_param(const BernoulliEnsemble& ens, double delta);
EtaSolution eta_param(const AdditiveFunction& f, std::uint64_t x, double delta);

struct MaciulisTail {
  double eta = 0.0;
  double exponent = 0.0;  // sum (e^{eta w} - eta w - 1)/p - eta sum w (e^{eta w} - 1)/p
  double log_value = 0.0;
  double value = 0.0;
  bool guard_exceeded = false;  // delta / B above guard_ratio
};

// exp(exponent) e^{delta^2/2} normal_tail(delta), evaluated in log-space.
MaciulisTail maciulis_tail(const BernoulliEnsemble& ens, double delta, double guard_ratio = 0.2);

}  // namespace adlab
