#include "adlab/prime_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adlab/error.hpp"
#include "adlab/sieve.hpp"
#include "adlab/summation.hpp"

namespace adlab {

namespace {

struct Accumulator {
  std::uint64_t count = 0;
  CompensatedSum mu;
  CompensatedSum sigma2;
  CompensatedSum b2;

  void add(std::uint64_t p, double fp) {
    const double inv = 1.0 / static_cast<double>(p);
    const double sq = fp * fp * inv;
    ++count;
    mu.add(fp * inv);
    b2.add(sq);
    sigma2.add(sq * (1.0 - inv));
  }

  PrimeStats snapshot(std::uint64_t x) const {
    PrimeStats s;
    s.x = x;
    s.pi_x = count;
    s.mu = mu.value();
    s.sigma2 = sigma2.value();
    s.B2 = b2.value();
    s.loglog_x = std::log(std::log(static_cast<double>(x)));
    return s;
  }
};

}  // namespace

double PrimeStats::sigma() const { return std::sqrt(sigma2); }
double PrimeStats::B() const { return std::sqrt(B2); }

PrimeStats prime_stats(const AdditiveFunction& f, std::uint64_t x) {
  const std::uint64_t grid[] = {x};
  return prime_stats_grid(f, grid).front();
}

std::vector<PrimeStats> prime_stats_grid(const AdditiveFunction& f,
                                         std::span<const std::uint64_t> xs) {
  if (xs.empty()) throw DomainError("prime_stats: empty x grid");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 3) throw DomainError("prime_stats: x must be >= 3");
    if (i > 0 && xs[i] <= xs[i - 1]) throw DomainError("prime_stats: x grid must be ascending");
  }
  std::vector<PrimeStats> out;
  out.reserve(xs.size());
  Accumulator acc;
  std::size_t next = 0;
  for_each_prime(xs.back(), [&](std::uint64_t p) {
    while (next < xs.size() && xs[next] < p) out.push_back(acc.snapshot(xs[next++]));
    acc.add(p, f.at_prime(p));
  });
  while (next < xs.size()) out.push_back(acc.snapshot(xs[next++]));
  return out;
}

PrimeCdf prime_cdf(const AdditiveFunction& f, std::uint64_t x, std::span<const double> t_grid) {
  if (x < 3) throw DomainError("prime_cdf: x must be >= 3");
  struct Item {
    double value;
    double weight;
  };
  std::vector<Item> items;
  for_each_prime(x, [&](std::uint64_t p) {
    const double v = f.at_prime(p);
    items.push_back({v, v * v / static_cast<double>(p)});
  });
  // Stable sort keeps ascending-p order among ties, so the weighted sums are
  // reproducible.
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.value < b.value; });

  std::vector<double> cum_weight(items.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < items.size(); ++i) {
    running.add(items[i].weight);
    cum_weight[i] = running.value();
  }
  const double total = items.empty() ? 0.0 : cum_weight.back();
  const double n = static_cast<double>(items.size());

  PrimeCdf out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.F.reserve(t_grid.size());
  out.K.reserve(t_grid.size());
  for (const double t : t_grid) {
    const auto it = std::upper_bound(items.begin(), items.end(), t,
                                     [](double tv, const Item& item) { return tv < item.value; });
    const auto k = static_cast<std::size_t>(it - items.begin());
    out.F.push_back(static_cast<double>(k) / n);
    out.K.push_back(k == 0 || total == 0.0 ? 0.0 : cum_weight[k - 1] / total);
  }
  return out;
}

std::vector<double> prime_power_sums(const AdditiveFunction& f, std::uint64_t x, int max_power) {
  if (max_power < 0) throw DomainError("prime_power_sums: negative power");
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(max_power) + 1);
  for_each_prime(x, [&](std::uint64_t p) {
    const double fp = f.at_prime(p);
    double term = 1.0 / static_cast<double>(p);
    for (auto& s : sums) {
      s.add(term);
      term *= fp;
    }
  });
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

}  // namespace adlab
