#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlab/additive_function.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/psi.hpp"

namespace adlab {

// A quantity carried in log-space; value is set when exp(log) is a normal double.
struct LogValue {
  double log = 0.0;
  std::optional<double> value;

  static LogValue from_log(double log_value);
};

struct OmegaSolution {
  double omega = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// omega(z) >= 0 solving Psi^'(w) = Psi^'(0) + z Psi^''(0); Newton with a
// bisection fallback on a geometrically grown bracket.
OmegaSolution solve_omega(const PsiDistribution& psi, double z);

struct SaddleSolution {
  double x = 0.0;
  double delta = 0.0;
  double sigma_psi = 0.0;  // sqrt(Psi^''(0) loglog x)
  double v = 0.0;
  double psi_hat = 1.0;    // Psi^(v)
  double psi_hat_1 = 0.0;  // Psi^'(v)
  double psi_hat_2 = 0.0;  // Psi^''(v)
  std::optional<LogValue> S;
  int newton_iters = 0;
  double residual = 0.0;
};

// v_f(x; delta) = omega(delta / sigma_Psi). x >= 16, delta >= 0.
SaddleSolution v_param(const PsiDistribution& psi, double x, double delta);

// S_f(x; delta) = (log x)^{Psi^(v) - 1 - v Psi^'(v)} / (v sqrt(2 pi Psi^''(v) loglog x)).
LogValue S_formula(const PsiDistribution& psi, double x, double delta);

struct LProduct {
  double value = 0.0;
  double log_value = 0.0;
  double log_value_half = 0.0;  // same product truncated at P/2
  double tail_bound = 0.0;      // |C| / log P, C from the P vs P/2 comparison
  std::uint64_t P = 0;
};

// prod_{p <= P} (1 - 1/p)^{Psi^(z)} (1 + e^{z f(p)} / (p - 1)), accumulated in log-space.
LProduct L_product(const AdditiveFunction& f, const PsiDistribution& psi, double z, std::uint64_t P);

struct CConstant {
  double c = 0.0;
  double uncertainty = 0.0;
  bool spread_warning = false;
  std::vector<std::uint64_t> grid;
  std::vector<double> estimates;
};

// c(f) estimated as mu(f; x) - Psi^'(0) loglog x on an ascending grid; the
// uncertainty is the spread over the top half of the grid.
CConstant c_constant(const AdditiveFunction& f, const PsiDistribution& psi,
                     std::span<const std::uint64_t> grid, double spread_bound = 1e-2);

// A(f; z) = exp(-gamma (Psi^(omega(z)) - 1)) / Gamma(Psi^(omega(z))).
double a_factor(const PsiDistribution& psi, double z);

// Taylor coefficients a_0..a_K of E(z) = A(omega(z)) with A(v) = Psi^(v) - 1 - v Psi^'(v).
std::vector<double> exponent_series(const PsiDistribution& psi, int K);

// ceil((1 + alpha) / (1 - alpha)) for 1/3 < alpha < 1.
int rho_alpha(double alpha);

struct MomentEquivalence {
  bool equivalent = false;
  int k_min = 3;
  int k_max = 3;
  double max_discrepancy = 0.0;
};

// Compares moments 3..rho(alpha). Both laws must share the second moment.
MomentEquivalence moment_equivalence(const PsiDistribution& a, const PsiDistribution& b,
                                     double alpha, double tol = 1e-9);

enum class AsymLevel { kNormal, kSOnly, kFull };

const char* to_string(AsymLevel level) noexcept;

// Inputs for the non-lattice FULL prediction.
struct FullInputs {
  double c_f = 0.0;
  std::function<double(double)> log_L;  // v -> log L(f; v)
};

// Extra inputs for the lattice (on Z) FULL prediction.
struct LatticeInputs {
  std::function<double(double)> log_L_g;       // v -> log L(g; v)
  std::function<double(double, double)> p_h;   // (a, v) -> P_h(a; v)
  double mu = 0.0;                             // mu(f; x)
  double sigma = 0.0;                          // sigma(f; x)
};

struct RegimeOptions {
  double normal_guard = 1.0;  // NORMAL trusted for delta <= guard * (loglog x)^{1/6}
  double delta_frac = 0.5;    // saddle levels trusted for delta <= delta_frac * sigma_Psi
};

struct Prediction {
  double delta = 0.0;
  double v = 0.0;
  AsymLevel level = AsymLevel::kNormal;
  std::string regime;
  bool extrapolated = false;
  LogValue prediction;
  std::optional<double> L;
  std::optional<double> exp_minus_vc;
  std::optional<double> inv_gamma;
  std::optional<double> P_h;
};

Prediction tail_asymptotic(const PsiDistribution& psi, double x, double delta, AsymLevel level,
                           const FullInputs* full = nullptr, const LatticeInputs* lattice = nullptr,
                           RegimeOptions regime = {});

struct XiThreshold {
  double xi = 0.0;
  double surrogate = 0.0;
  double difference = 0.0;
};

// xi_f(x; delta) = mu + delta sigma against Psi^'(v) loglog x + c(f).
XiThreshold xi_threshold(const PrimeStats& stats, const PsiDistribution& psi, double c_f,
                         double delta);

}  // namespace adlab
