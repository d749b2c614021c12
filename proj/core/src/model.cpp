#include "adlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "adlab/error.hpp"
#include "adlab/philox.hpp"
#include "adlab/sieve.hpp"
#include "adlab/special.hpp"
#include "adlab/summation.hpp"

namespace adlab {

namespace {

constexpr double kMaxExponent = 700.0;
constexpr int kMaxSolverIterations = 200;

// expm1(y) / y, continuous at 0.
double phi1(double y) {
  if (y == 0.0) return 1.0;
  return std::expm1(y) / y;
}

// (e^y - 1 - y) / y^2, continuous at 0.
double phi2(double y) {
  if (std::fabs(y) < 0.5) {
    double term = 0.5;
    double sum = 0.5;
    for (int k = 1; k < 24; ++k) {
      term *= y / static_cast<double>(k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(y) - y) / (y * y);
}

std::string fmt(double v) { return std::to_string(v); }

// Smallest integer index k with k >= t / q, tolerating relative noise 1e-9.
long long threshold_index(double t, double q) {
  const double r = t / q;
  const double idx = std::ceil(r - 1e-9 * std::max(1.0, std::fabs(r)));
  if (idx > static_cast<double>(std::numeric_limits<long long>::max() / 2)) {
    throw ResourceError("threshold index overflows the DP state space");
  }
  return static_cast<long long>(idx);
}

struct Grid {
  double q = 1.0;
  double snap_error = 0.0;
  std::vector<long long> steps;
};

Grid make_grid(const BernoulliEnsemble& ens, const DpOptions& opts) {
  Grid g;
  bool allow_snap = opts.allow_snap;
  if (opts.grid_step > 0.0) {
    g.q = opts.grid_step;
  } else {
    std::vector<double> nonzero;
    for (const double w : ens.weights()) {
      if (w > 0.0) nonzero.push_back(w);
    }
    const auto lat = lattice_detect(nonzero);
    if (nonzero.empty()) {
      g.q = 1.0;
    } else if (lat.is_lattice) {
      g.q = lat.span;
    } else {
      g.q = kSnapStep;
      allow_snap = true;
    }
  }
  g.steps.reserve(ens.size());
  for (const double w : ens.weights()) {
    const double k = std::round(w / g.q);
    const double err = std::fabs(w - k * g.q);
    if (err > opts.lattice_tol * std::max(1.0, w) && !allow_snap) {
      throw PreconditionError("exact_tail_dp: weight " + fmt(w) + " is not a multiple of grid step " +
                              fmt(g.q) + "; enable snapping or use Monte Carlo");
    }
    g.snap_error = std::max(g.snap_error, err);
    g.steps.push_back(static_cast<long long>(k));
  }
  return g;
}

}  // namespace

BernoulliEnsemble::BernoulliEnsemble(std::vector<std::uint64_t> primes, std::vector<double> weights)
    : primes_(std::move(primes)), weights_(std::move(weights)) {
  if (primes_.size() != weights_.size()) throw DomainError("ensemble: primes and weights differ in length");
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (primes_[i] < 2) throw DomainError("ensemble: primes must be >= 2");
    if (i > 0 && primes_[i] <= primes_[i - 1]) throw DomainError("ensemble: primes must be strictly ascending");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw DomainError("ensemble: weight at p=" + std::to_string(primes_[i]) + " must be finite and >= 0");
    }
  }
}

BernoulliEnsemble BernoulliEnsemble::from_function(const AdditiveFunction& f, std::uint64_t x) {
  std::vector<std::uint64_t> primes = sieve_primes(x);
  std::vector<double> weights;
  weights.reserve(primes.size());
  for (const auto p : primes) weights.push_back(f.at_prime(p));
  return BernoulliEnsemble(std::move(primes), std::move(weights));
}

double BernoulliEnsemble::mean() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) s.add(weights_[i] / static_cast<double>(primes_[i]));
  return s.value();
}

double BernoulliEnsemble::variance() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    const double p = static_cast<double>(primes_[i]);
    s.add(weights_[i] * weights_[i] / p * (1.0 - 1.0 / p));
  }
  return s.value();
}

double BernoulliEnsemble::b2() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    s.add(weights_[i] * weights_[i] / static_cast<double>(primes_[i]));
  }
  return s.value();
}

double model_log_mgf(const BernoulliEnsemble& ens, double s) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double e = s * ens.weights()[i];
    if (e > kMaxExponent) throw RangeError("model_mgf: s w(p) overflows at p=" + std::to_string(ens.primes()[i]));
    acc.add(std::log1p(std::expm1(e) / static_cast<double>(ens.primes()[i])));
  }
  return acc.value();
}

double model_mgf(const BernoulliEnsemble& ens, double s) {
  const double l = model_log_mgf(ens, s);
  if (l > 709.0) throw RangeError("model_mgf: value overflows a double (log = " + fmt(l) + ")");
  return std::exp(l);
}

const char* to_string(TailMethod m) noexcept {
  switch (m) {
    case TailMethod::kDp:
      return "DP";
    case TailMethod::kMc:
      return "MC";
    case TailMethod::kClosed:
      return "CLOSED";
  }
  return "?";
}

DpLaw dp_law(const BernoulliEnsemble& ens, DpOptions opts) {
  const Grid g = make_grid(ens, opts);
  long long total = 0;
  for (const auto k : g.steps) total += k;
  if (static_cast<std::size_t>(total) + 1 > opts.max_states) {
    throw ResourceError("dp_law: " + std::to_string(total + 1) + " states exceed the limit");
  }
  DpLaw out;
  out.grid_step = g.q;
  out.snap_error = g.snap_error;
  out.law.assign(static_cast<std::size_t>(total) + 1, 0.0);
  out.law[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const long long k = g.steps[i];
    if (k == 0) continue;
    const double ip = 1.0 / static_cast<double>(ens.primes()[i]);
    for (long long j = reach; j >= 0; --j) {
      const double m = out.law[static_cast<std::size_t>(j)] * ip;
      out.law[static_cast<std::size_t>(j)] -= m;
      out.law[static_cast<std::size_t>(j + k)] += m;
    }
    reach += k;
  }
  return out;
}

TailEstimate exact_tail_dp(const BernoulliEnsemble& ens, double t, DpOptions opts) {
  const Grid g = make_grid(ens, opts);
  TailEstimate est;
  est.method = TailMethod::kDp;
  est.grid_step = g.q;
  if (g.snap_error > 0.0) est.snap_error = g.snap_error;
  const long long T = threshold_index(t, g.q);
  if (T <= 0) {
    est.value = 1.0;
    return est;
  }
  if (static_cast<std::size_t>(T) + 1 > opts.max_states) {
    throw ResourceError("exact_tail_dp: " + std::to_string(T + 1) +
                        " states exceed the limit; use the Monte Carlo method");
  }
  // dp[0..T-1] exact masses, dp[T] absorbs every outcome >= T.
  std::vector<double> dp(static_cast<std::size_t>(T) + 1, 0.0);
  dp[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const long long k = g.steps[i];
    if (k == 0) continue;
    const double ip = 1.0 / static_cast<double>(ens.primes()[i]);
    for (long long j = std::min(reach, T - 1); j >= 0; --j) {
      const double m = dp[static_cast<std::size_t>(j)] * ip;
      dp[static_cast<std::size_t>(j)] -= m;
      dp[static_cast<std::size_t>(std::min(j + k, T))] += m;
    }
    reach = std::min(reach + k, T);
  }
  est.value = std::clamp(dp[static_cast<std::size_t>(T)], 0.0, 1.0);
  return est;
}

std::uint64_t mc_hits(const BernoulliEnsemble& ens, double t, std::uint64_t seed, std::uint64_t first,
                      std::uint64_t count) {
  if (t <= 0.0) return count;
  // Same threshold tolerance as threshold_index.
  t -= 1e-9 * std::max(1.0, std::fabs(t));
  const Philox4x32 gen(Philox4x32::key_from_seed(seed));
  const std::size_t n = ens.size();
  std::vector<double> inv_p(n);
  for (std::size_t i = 0; i < n; ++i) inv_p[i] = 1.0 / static_cast<double>(ens.primes()[i]);
  const auto& w = ens.weights();
  std::uint64_t hits = 0;
  for (std::uint64_t r = first; r < first + count; ++r) {
    double sum = 0.0;
    for (std::size_t base = 0; base < n && sum < t; base += 4) {
      const auto words = gen({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32),
                              static_cast<std::uint32_t>(base / 4), 0u});
      const std::size_t lim = std::min<std::size_t>(4, n - base);
      for (std::size_t j = 0; j < lim; ++j) {
        if (Philox4x32::to_unit(words[j]) < inv_p[base + j]) sum += w[base + j];
      }
    }
    if (sum >= t) ++hits;
  }
  return hits;
}

TailEstimate mc_tail(const BernoulliEnsemble& ens, double t, std::uint64_t N, std::uint64_t seed) {
  if (N < 1000) throw PreconditionError("mc_tail: need at least 1000 samples");
  TailEstimate est;
  est.method = TailMethod::kMc;
  est.samples = N;
  est.seed = seed;
  const std::uint64_t hits = mc_hits(ens, t, seed, 0, N);
  est.value = static_cast<double>(hits) / static_cast<double>(N);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(N));
  return est;
}

TailEstimate centered_tail(const BernoulliEnsemble& ens, double delta, const PrimeStats& stats,
                           CenteredOptions opts) {
  const double t = stats.mu + delta * stats.sigma();
  if (t <= 0.0) {
    TailEstimate est;
    est.value = 1.0;
    est.method = TailMethod::kClosed;
    return est;
  }
  switch (opts.method) {
    case TailMethod::kMc:
      return mc_tail(ens, t, opts.samples, opts.seed);
    case TailMethod::kDp:
    case TailMethod::kClosed:
      break;
  }
  return exact_tail_dp(ens, t, opts.dp);
}

GHSplit split_gh(const AdditiveFunction& f, std::uint64_t x, double tol) {
  std::vector<AdditiveFunction::TableEntry> g;
  std::vector<AdditiveFunction::TableEntry> h;
  std::vector<std::uint64_t> S;
  for_each_prime(x, [&](std::uint64_t p) {
    const double v = f.at_prime(p);
    const double near = std::round(v);
    if (std::fabs(v - near) <= tol) {
      g.push_back({p, near});
      h.push_back({p, 0.0});
    } else {
      g.push_back({p, 0.0});
      h.push_back({p, v});
      S.push_back(p);
    }
  });
  return GHSplit{AdditiveFunction::table(std::move(g), f.name() + ".g"),
                 AdditiveFunction::table(std::move(h), f.name() + ".h"), std::move(S)};
}

XhLaw::XhLaw(std::vector<AdditiveFunction::TableEntry> S, std::uint64_t n_max, double warn_tol)
    : S_(std::move(S)), warn_tol_(warn_tol) {
  if (S_.size() > kMaxPrimes) {
    throw ResourceError("xh_law: at most " + std::to_string(kMaxPrimes) + " primes supported, got " +
                        std::to_string(S_.size()));
  }
  if (n_max < 1) throw DomainError("xh_law: N_max must be >= 1");
  std::sort(S_.begin(), S_.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  for (std::size_t i = 0; i < S_.size(); ++i) {
    if (S_[i].p < 2 || (i > 0 && S_[i].p == S_[i - 1].p)) throw DomainError("xh_law: primes must be distinct and >= 2");
    if (!(S_[i].value > 0.0)) throw DomainError("xh_law: h(p) must be > 0 on S");
  }

  // Depth-first over exponent vectors; h(n) depends only on which primes divide n.
  std::vector<std::pair<double, double>> raw;  // (h(n), 1/n)
  std::function<void(std::size_t, std::uint64_t, double)> walk = [&](std::size_t i, std::uint64_t n, double value) {
    if (i == S_.size()) {
      raw.emplace_back(value, 1.0 / static_cast<double>(n));
      return;
    }
    walk(i + 1, n, value);
    const std::uint64_t p = S_[i].p;
    const double with_p = value + S_[i].value;
    for (std::uint64_t m = n; m <= n_max / p;) {
      m *= p;
      walk(i + 1, m, with_p);
    }
  };
  walk(0, 1, 0.0);
  enumerated_ = raw.size();

  std::sort(raw.begin(), raw.end());
  double C = 1.0;
  for (const auto& e : S_) C *= 1.0 - 1.0 / static_cast<double>(e.p);
  CompensatedSum total;
  std::size_t i = 0;
  while (i < raw.size()) {
    const double v = raw[i].first;
    CompensatedSum mass;
    std::size_t j = i;
    while (j < raw.size() && raw[j].first - v <= 1e-12 * std::max(1.0, v)) mass.add(raw[j++].second);
    points_.push_back({v, C * mass.value()});
    total.add(C * mass.value());
    i = j;
  }
  CompensatedSum cum;
  for (const auto& pt : points_) {
    cum.add(pt.mass);
    cum_.push_back(cum.value());
  }
  max_value_ = points_.empty() ? 0.0 : points_.back().value;
  remainder_ = std::max(0.0, 1.0 - total.value());
}

XhLaw XhLaw::from_function(const AdditiveFunction& h, std::uint64_t x, std::uint64_t n_max) {
  std::vector<AdditiveFunction::TableEntry> S;
  if (x >= 2) {
    for_each_prime(x, [&](std::uint64_t p) {
      const double v = h.at_prime(p);
      if (v != 0.0) S.push_back({p, v});
    });
  }
  return XhLaw(std::move(S), n_max);
}

double XhLaw::cdf(double t) const {
  if (t < 0.0) return 0.0;
  const double lim = t + 1e-12 * std::max(1.0, std::fabs(t));
  const auto it = std::upper_bound(points_.begin(), points_.end(), lim,
                                   [](double a, const Point& p) { return a < p.value; });
  if (it == points_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double XhLaw::tail_ge(double t) const {
  if (t <= 0.0) return 1.0;
  const double tol = 1e-12 * std::max(1.0, std::fabs(t));
  if (t > max_value_ + tol) return 0.0;
  const auto it = std::lower_bound(points_.begin(), points_.end(), t - tol,
                                   [](const Point& p, double a) { return p.value < a; });
  if (it == points_.begin()) return 1.0;
  return std::clamp(1.0 - cum_[static_cast<std::size_t>(it - points_.begin()) - 1], 0.0, 1.0);
}

double XhLaw::log_mgf(double s) const {
  CompensatedSum acc;
  for (const auto& e : S_) acc.add(std::log1p(std::expm1(s * e.value) / static_cast<double>(e.p)));
  return acc.value();
}

PhFactor p_h_factor(const XhLaw& law, double a, double v, std::optional<int> K) {
  if (!(v > 0.0 && v <= 8.0)) throw DomainError("p_h_factor: v must lie in (0, 8]");
  if (!std::isfinite(a)) throw DomainError("p_h_factor: a must be finite");
  if (K && *K < 0) throw DomainError("p_h_factor: K must be >= 0");
  const double frac = a - std::floor(a);
  PhFactor out;
  // l <= -1: P(X >= l + {a}) = 1, a geometric series.
  CompensatedSum sum(v * std::exp(v * frac) / std::expm1(v));
  CompensatedSum trunc_err;
  const double tol = 1e-12 * std::max(1.0, law.max_value());
  int last = -1;
  for (int l = 0; !K || l <= *K; ++l) {
    const double y = l + frac;
    if (y > law.max_value() + tol) break;
    const double w = v * std::exp(v * y);
    sum.add(w * law.tail_ge(y));
    if (y > 0.0) trunc_err.add(w * law.remainder());
    last = l;
    ++out.terms;
  }
  out.value = sum.value();
  out.remainder_bound = trunc_err.value();
  const double next = last + 1 + frac;
  if (K && next <= law.max_value() + tol) {
    // Chernoff at s = 2v: P(X >= y) <= exp(log E e^{sX} - s y).
    const double s = 2.0 * v;
    out.remainder_bound += v * std::exp(law.log_mgf(s) - v * next) / (-std::expm1(-v));
  }
  out.precision_warning = out.remainder_bound > 1e-9 * out.value || law.precision_warning();
  return out;
}

double poisson_tail(double lambda, double delta) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("poisson_tail: lambda must be finite and >= 0");
  if (std::isnan(delta)) throw DomainError("poisson_tail: delta is NaN");
  const double thr = lambda + delta * std::sqrt(lambda);
  if (thr <= 0.0) return 1.0;
  const double k0 = std::ceil(thr - 1e-12 * std::max(1.0, thr));
  if (k0 <= 0.0) return 1.0;
  if (lambda == 0.0) return 0.0;
  if (lambda > 1e6) return boost::math::gamma_p(k0, lambda);

  // e^{-lambda} lambda^k / k! without cancellation in the exponent.
  auto pmf = [&](double k) { return boost::math::gamma_p_derivative(k + 1.0, lambda); };
  CompensatedSum s;
  if (k0 > lambda) {
    double term = pmf(k0);
    for (double k = k0; term > 0.0; k += 1.0) {
      s.add(term);
      if (term < 1e-18 * s.value()) break;
      term *= lambda / (k + 1.0);
    }
    return std::min(1.0, s.value());
  }
  double term = pmf(k0 - 1.0);
  for (double k = k0 - 1.0; k >= 0.0 && term > 0.0; k -= 1.0) {
    s.add(term);
    if (term < 1e-18 * s.value()) break;
    term *= k / lambda;
  }
  return std::clamp(1.0 - s.value(), 0.0, 1.0);
}

double levy_u(const PsiDistribution& psi, double z, int order) {
  if (order < 0 || order > 2) throw DomainError("levy_u: order must be 0, 1 or 2");
  if (z * psi.support_max() > kMaxExponent) throw RangeError("levy_u: z t overflows");
  if (order == 2) return laplace(psi, z, 0);
  auto kernel = [&](double t) {
    const double y = z * t;
    return order == 0 ? z * z * phi2(y) : z * phi1(y);
  };
  CompensatedSum acc;
  for (const auto& a : psi.atoms()) acc.add(a.mass * kernel(a.t));
  const auto& kn = psi.knots();
  for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
    const double lo = kn[i].t;
    const double hi = kn[i + 1].t;
    const double density = (kn[i + 1].F - kn[i].F) / (hi - lo);
    if (density == 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(z) * (hi - lo) / 2.0)));
    const double w = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double a = lo + k * w;
      acc.add(density * boost::math::quadrature::gauss<double, 20>::integrate(kernel, a, a + w));
    }
  }
  return acc.value();
}

double solve_rho(const PsiDistribution& psi, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) throw DomainError("solve_rho: target must be finite and >= 0");
  if (target == 0.0) return 0.0;
  auto g = [&](double r) { return levy_u(psi, r, 1) - target; };
  double lo = 0.0;
  double hi = 1.0;
  double g_hi = g(hi);
  while (g_hi < 0.0) {
    lo = hi;
    hi *= 2.0;
    g_hi = g(hi);
  }
  double r = hi;
  double gr = g_hi;
  for (int it = 0; it < kMaxSolverIterations; ++it) {
    if (std::fabs(gr) <= 4.0 * std::numeric_limits<double>::epsilon() * target) return r;
    if (gr > 0.0) {
      hi = r;
    } else {
      lo = r;
    }
    double next = r - gr / levy_u(psi, r, 2);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return r;
    r = next;
    gr = g(r);
  }
  throw NumericError("solve_rho: no convergence (target=" + fmt(target) + ")");
}

LevyTail levy_tail(const PsiDistribution& psi, double B2, double delta, LevyMode mode) {
  if (!(B2 > 0.0)) throw DomainError("levy_tail: B2 must be > 0");
  LevyTail out;
  out.mode = mode;
  if (mode == LevyMode::kExactPoisson) {
    const auto& at = psi.atoms();
    if (psi.has_continuous_part() || at.size() != 1 || at[0].t != 1.0) {
      throw PreconditionError("levy_tail: EXACT_POISSON requires Psi = point mass at 1");
    }
    out.value = poisson_tail(B2, delta);
    out.log_value = std::log(out.value);
    return out;
  }
  if (!(delta >= 0.0)) throw DomainError("levy_tail: SADDLE needs delta >= 0");
  const double B = std::sqrt(B2);
  out.rho = solve_rho(psi, delta / B);
  const double exponent = B2 * (levy_u(psi, out.rho, 0) - out.rho * levy_u(psi, out.rho, 1));
  out.log_value = exponent + 0.5 * delta * delta + log_normal_tail(delta);
  out.value = std::exp(out.log_value);
  return out;
}

EtaSolution eta_param(const BernoulliEnsemble& ens, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("eta_param: delta must be > 0");
  const double B2 = ens.b2();
  if (!(B2 > 0.0)) throw DomainError("eta_param: B^2 must be > 0");
  const double target = ens.mean() + delta * std::sqrt(B2);
  double wmax = 0.0;
  for (const double w : ens.weights()) wmax = std::max(wmax, w);

  auto eval = [&](double eta, double& slope) {
    if (eta * wmax > kMaxExponent) throw RangeError("eta_param: eta w(p) overflows");
    CompensatedSum s0;
    CompensatedSum s1;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const double w = ens.weights()[i];
      const double t = w * std::exp(eta * w) / static_cast<double>(ens.primes()[i]);
      s0.add(t);
      s1.add(w * t);
    }
    slope = s1.value();
    return s0.value() - target;
  };

  EtaSolution sol;
  double slope = 0.0;
  double lo = 0.0;
  double hi = delta / std::sqrt(B2);
  double g_hi = eval(hi, slope);
  while (g_hi < 0.0) {
    lo = hi;
    hi *= 2.0;
    g_hi = eval(hi, slope);
  }
  double eta = hi;
  double g = g_hi;
  for (int it = 1; it <= kMaxSolverIterations; ++it) {
    sol.iterations = it;
    if (g > 0.0) {
      hi = eta;
    } else {
      lo = eta;
    }
    const bool tight = std::fabs(g) <= 4.0 * std::numeric_limits<double>::epsilon() * target;
    double next = eta - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (tight || next == eta || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      sol.eta = eta;
      sol.residual = std::fabs(g);
      if (sol.residual > 1e-12 * B2) {
        throw NumericError("eta_param: residual " + fmt(sol.residual) + " above 1e-12 B^2");
      }
      return sol;
    }
    eta = next;
    g = eval(eta, slope);
  }
  throw NumericError("eta_param: no convergence in 200 iterations");
}

EtaSolution eta_param(const AdditiveFunction& f, std::uint64_t x, double delta) {
  return eta_param(BernoulliEnsemble::from_function(f, x), delta);
}

MaciulisTail maciulis_tail(const BernoulliEnsemble& ens, double delta, double guard_ratio) {
  if (!(delta >= 0.0)) throw DomainError("maciulis_tail: delta must be >= 0");
  MaciulisTail out;
  const double B = std::sqrt(ens.b2());
  out.guard_exceeded = delta / B > guard_ratio;
  if (delta > 0.0) {
    out.eta = eta_param(ens, delta).eta;
    CompensatedSum e;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const double y = out.eta * ens.weights()[i];
      // (e^y - y - 1) - y (e^y - 1) = y^2 (phi2(y) - phi1(y)).
      e.add(y * y * (phi2(y) - phi1(y)) / static_cast<double>(ens.primes()[i]));
    }
    out.exponent = e.value();
  }
  out.log_value = out.exponent + 0.5 * delta * delta + log_normal_tail(delta);
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace adlab
