#include "adlab/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adlab/error.hpp"
#include "adlab/power_series.hpp"
#include "adlab/sieve.hpp"
#include "adlab/special.hpp"
#include "adlab/summation.hpp"

namespace adlab {

namespace {

constexpr int kMaxNewtonIterations = 200;

double loglog_of(double x) {
  if (!(x > std::exp(1.0))) throw DomainError("x must exceed e so that loglog x > 0");
  return std::log(std::log(x));
}

double log_gamma_positive(double s) {
  // Gamma(s) > 0 for s >= 1, which covers Psi^(v) for v >= 0.
  if (s < 170.0) return std::log(std::tgamma(s));
  return std::lgamma(s);
}

}  // namespace

LogValue LogValue::from_log(double log_value) {
  LogValue out;
  out.log = log_value;
  if (log_value > -708.0 && log_value < 709.0) out.value = std::exp(log_value);
  return out;
}

OmegaSolution solve_omega(const PsiDistribution& psi, double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("solve_omega: z must be finite and >= 0");
  OmegaSolution sol;
  if (z == 0.0) return sol;

  const double d1_0 = moment(psi, 1);
  const double d2_0 = moment(psi, 2);
  const double target = d1_0 + z * d2_0;
  const double tol = 1e-13 * d2_0;
  auto g = [&](double w) { return laplace(psi, w, 1) - target; };

  double lo = 0.0;
  double hi = 1.0;
  double g_hi = g(hi);
  while (g_hi < 0.0) {
    lo = hi;
    hi *= 2.0;
    g_hi = g(hi);
  }

  double w = hi;
  double gw = g_hi;
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    sol.iterations = it;
    if (std::fabs(gw) <= tol) {
      sol.omega = w;
      sol.residual = std::fabs(gw);
      return sol;
    }
    if (gw > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    const double slope = laplace(psi, w, 2);
    double next = w - gw / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      // Bracket collapsed to rounding level; the residual is as small as
      // double arithmetic allows.
      sol.omega = w;
      sol.residual = std::fabs(gw);
      return sol;
    }
    w = next;
    gw = g(w);
  }
  throw NumericError("solve_omega: no convergence in 200 iterations (z=" + std::to_string(z) +
                     ", last w=" + std::to_string(w) + ", residual=" + std::to_string(gw) + ")");
}

SaddleSolution v_param(const PsiDistribution& psi, double x, double delta) {
  if (!(x >= 16.0)) throw DomainError("v_param: x must be >= 16");
  if (!(delta >= 0.0)) throw DomainError("v_param: delta must be >= 0");
  SaddleSolution s;
  s.x = x;
  s.delta = delta;
  const double ll = loglog_of(x);
  s.sigma_psi = std::sqrt(moment(psi, 2) * ll);
  const auto om = solve_omega(psi, delta / s.sigma_psi);
  s.v = om.omega;
  s.newton_iters = om.iterations;
  s.residual = om.residual;
  s.psi_hat = laplace(psi, s.v, 0);
  s.psi_hat_1 = laplace(psi, s.v, 1);
  s.psi_hat_2 = laplace(psi, s.v, 2);
  if (delta > 0.0) {
    const double exponent = s.psi_hat - 1.0 - s.v * s.psi_hat_1;
    s.S = LogValue::from_log(exponent * ll - std::log(s.v) -
                             0.5 * std::log(2.0 * kPi * s.psi_hat_2 * ll));
  }
  return s;
}

LogValue S_formula(const PsiDistribution& psi, double x, double delta) {
  if (!(delta > 0.0)) throw DomainError("S_formula: delta must be > 0 (formula has 1/v)");
  return *v_param(psi, x, delta).S;
}

LProduct L_product(const AdditiveFunction& f, const PsiDistribution& psi, double z, std::uint64_t P) {
  if (P < 1000) throw DomainError("L_product: truncation P must be >= 1000");
  const double psi_z = laplace(psi, z, 0);
  const std::uint64_t half = P / 2;
  CompensatedSum log_sum;
  double log_half = 0.0;
  bool half_taken = false;
  for_each_prime(P, [&](std::uint64_t p) {
    if (!half_taken && p > half) {
      log_half = log_sum.value();
      half_taken = true;
    }
    const double e = z * f.at_prime(p);
    if (e > 700.0) throw RangeError("L_product: z f(p) overflows at p=" + std::to_string(p));
    const double pd = static_cast<double>(p);
    const double ratio = std::exp(e) / (pd - 1.0);
    if (!(1.0 + ratio > 0.0)) throw NumericError("L_product: nonpositive factor at p=" + std::to_string(p));
    log_sum.add(psi_z * std::log1p(-1.0 / pd) + std::log1p(ratio));
  });
  if (!half_taken) log_half = log_sum.value();

  LProduct out;
  out.P = P;
  out.log_value = log_sum.value();
  out.value = std::exp(out.log_value);
  out.log_value_half = log_half;
  const double lp = std::log(static_cast<double>(P));
  const double lh = std::log(static_cast<double>(half));
  const double C = (out.log_value - log_half) / (1.0 / lh - 1.0 / lp);
  out.tail_bound = std::fabs(C) / lp;
  return out;
}

CConstant c_constant(const AdditiveFunction& f, const PsiDistribution& psi,
                     std::span<const std::uint64_t> grid, double spread_bound) {
  if (grid.size() < 3) throw PreconditionError("c_constant: need at least 3 grid points");
  if (grid.back() < 10'000'000) throw PreconditionError("c_constant: largest grid point must be >= 1e7");
  const auto stats = prime_stats_grid(f, grid);
  const double d1 = moment(psi, 1);
  CConstant out;
  out.grid.assign(grid.begin(), grid.end());
  for (const auto& s : stats) out.estimates.push_back(s.mu - d1 * s.loglog_x);
  out.c = out.estimates.back();
  const auto top = out.estimates.begin() + static_cast<std::ptrdiff_t>(out.estimates.size() / 2);
  const auto [mn, mx] = std::minmax_element(top, out.estimates.end());
  out.uncertainty = *mx - *mn;
  out.spread_warning = out.uncertainty > spread_bound;
  return out;
}

double a_factor(const PsiDistribution& psi, double z) {
  const double w = solve_omega(psi, z).omega;
  const double s = laplace(psi, w, 0);
  if (s < 170.0) return std::exp(-kEulerGamma * (s - 1.0)) / std::tgamma(s);
  return std::exp(-kEulerGamma * (s - 1.0) - std::lgamma(s));
}

std::vector<double> exponent_series(const PsiDistribution& psi, int K) {
  if (K < 2 || K > 32) throw DomainError("exponent_series: K must be in [2, 32]");
  std::vector<double> m(static_cast<std::size_t>(K) + 2);
  for (int k = 0; k <= K + 1; ++k) m[static_cast<std::size_t>(k)] = moment(psi, k);

  // F(w) = (Psi^'(w) - Psi^'(0)) / Psi^''(0) = w + ..., omega = F^{-1}.
  series::Series F(static_cast<std::size_t>(K) + 1, 0.0);
  series::Series A(static_cast<std::size_t>(K) + 1, 0.0);
  double fact = 1.0;  // k!
  for (int k = 1; k <= K; ++k) {
    fact *= k;
    F[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k + 1)] / (fact * m[2]);
    A[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k)] * (1.0 - k) / fact;
  }
  const auto omega = series::revert(F, K);
  auto E = series::compose(A, omega, K);
  if (std::fabs(E[0]) > 1e-13 || std::fabs(E[1]) > 1e-13) {
    throw NumericError("exponent_series: leading coefficients failed to vanish");
  }
  E[0] = 0.0;
  E[1] = 0.0;
  return E;
}

int rho_alpha(double alpha) {
  if (!(alpha > 1.0 / 3.0 && alpha < 1.0)) throw DomainError("rho_alpha: alpha must lie in (1/3, 1)");
  const double r = (1.0 + alpha) / (1.0 - alpha);
  const double nearest = std::round(r);
  // (1 + alpha) / (1 - alpha) lands on integers for alpha = 1/2, 0.6, ...;
  // rounding noise must not push ceil up by one.
  if (std::fabs(r - nearest) <= 1e-12 * r) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(r));
}

MomentEquivalence moment_equivalence(const PsiDistribution& a, const PsiDistribution& b,
                                     double alpha, double tol) {
  const double m2a = moment(a, 2);
  const double m2b = moment(b, 2);
  if (std::fabs(m2a - m2b) > 1e-12 * std::max(1.0, m2a)) {
    throw PreconditionError("moment_equivalence: second moments differ");
  }
  MomentEquivalence out;
  out.k_max = rho_alpha(alpha);
  out.equivalent = true;
  for (int k = out.k_min; k <= out.k_max; ++k) {
    const double ma = moment(a, k);
    const double mb = moment(b, k);
    const double scaled = std::fabs(ma - mb) / std::max(1.0, std::fabs(ma));
    out.max_discrepancy = std::max(out.max_discrepancy, scaled);
    if (scaled > tol) out.equivalent = false;
  }
  return out;
}

const char* to_string(AsymLevel level) noexcept {
  switch (level) {
    case AsymLevel::kNormal:
      return "normal";
    case AsymLevel::kSOnly:
      return "s";
    case AsymLevel::kFull:
      return "full";
  }
  return "?";
}

Prediction tail_asymptotic(const PsiDistribution& psi, double x, double delta, AsymLevel level,
                           const FullInputs* full, const LatticeInputs* lattice,
                           RegimeOptions regime) {
  Prediction out;
  out.delta = delta;
  out.level = level;
  const double ll = loglog_of(x);

  if (level == AsymLevel::kNormal) {
    out.regime = "normal";
    out.extrapolated = delta > regime.normal_guard * std::pow(ll, 1.0 / 6.0);
    if (delta >= 0.0) out.v = v_param(psi, x, delta).v;
    out.prediction = LogValue::from_log(log_normal_tail(delta));
    return out;
  }

  if (!(delta > 0.0)) throw DomainError("tail_asymptotic: saddle levels need delta > 0");
  const auto sol = v_param(psi, x, delta);
  out.v = sol.v;
  out.extrapolated = delta > regime.delta_frac * sol.sigma_psi;
  if (level == AsymLevel::kSOnly) {
    out.regime = "saddle";
    out.prediction = *sol.S;
    return out;
  }

  if (full == nullptr || !full->log_L) {
    throw PreconditionError("tail_asymptotic: FULL level needs c(f) and L inputs");
  }
  out.regime = "full";
  const auto lat = lattice_detect(psi);
  double log_pred = sol.S->log;
  const double log_gamma = log_gamma_positive(sol.psi_hat);
  out.exp_minus_vc = std::exp(-sol.v * full->c_f);
  out.inv_gamma = std::exp(-log_gamma);
  if (lat.is_lattice) {
    if (lattice == nullptr || !lattice->log_L_g || !lattice->p_h) {
      throw PreconditionError("tail_asymptotic: lattice Psi requires lattice inputs (L(g), P_h)");
    }
    if (std::fabs(lat.span - 1.0) > 1e-9) {
      throw PreconditionError("tail_asymptotic: lattice span must be 1; rescale f by its span");
    }
    const double log_L = lattice->log_L_g(sol.v);
    const double xi = lattice->mu + delta * lattice->sigma;
    const double ph = lattice->p_h(xi, sol.v);
    out.L = std::exp(log_L);
    out.P_h = ph;
    log_pred += log_L - sol.v * full->c_f - log_gamma + std::log(ph);
  } else {
    const double log_L = full->log_L(sol.v);
    out.L = std::exp(log_L);
    log_pred += log_L - sol.v * full->c_f - log_gamma;
  }
  out.prediction = LogValue::from_log(log_pred);
  return out;
}

XiThreshold xi_threshold(const PrimeStats& stats, const PsiDistribution& psi, double c_f,
                         double delta) {
  XiThreshold out;
  out.xi = stats.mu + delta * stats.sigma();
  const auto sol = v_param(psi, static_cast<double>(stats.x), delta);
  out.surrogate = sol.psi_hat_1 * stats.loglog_x + c_f;
  out.difference = out.xi - out.surrogate;
  return out;
}

}  // namespace adlab
