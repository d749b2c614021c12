#include "adlab/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "adlab/error.hpp"
#include "adlab/summation.hpp"

namespace adlab {

const char* to_string(Normalization n) noexcept {
  return n == Normalization::kSigma ? "sigma" : "B";
}

std::vector<std::uint64_t> tail_counts(const AdditiveFunction& f, std::uint64_t x,
                                       std::span<const double> thresholds, ValueOptions opts) {
  if (thresholds.empty()) throw DomainError("tail: empty threshold grid");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw DomainError("tail: thresholds must be ascending");
  }
  // hist[k] = number of n whose value clears exactly the first k thresholds.
  std::vector<std::uint64_t> hist(thresholds.size() + 1, 0);
  additive_values(
      f, x,
      [&](std::uint64_t, std::span<const double> block) {
        for (const double v : block) {
          const auto k = std::upper_bound(thresholds.begin(), thresholds.end(), v) -
                         thresholds.begin();
          ++hist[static_cast<std::size_t>(k)];
        }
      },
      opts);
  std::vector<std::uint64_t> counts(thresholds.size());
  std::uint64_t suffix = 0;
  for (std::size_t i = thresholds.size(); i-- > 0;) {
    suffix += hist[i + 1];
    counts[i] = suffix;
  }
  return counts;
}

namespace {

TailTable build_table(const AdditiveFunction& f, std::uint64_t x, std::span<const double> deltas,
                      Normalization normalization, const PrimeStats& stats, ValueOptions opts) {
  if (deltas.empty()) throw DomainError("empirical_tail: empty delta grid");
  if (!std::is_sorted(deltas.begin(), deltas.end())) {
    throw DomainError("empirical_tail: deltas must be ascending");
  }
  const double norm = normalization == Normalization::kSigma ? stats.sigma() : stats.B();
  if (!(norm > 0.0)) throw DomainError("empirical_tail: normalization is zero (degenerate f)");

  TailTable table;
  table.x = x;
  table.normalization = normalization;
  table.mu = stats.mu;
  table.norm = norm;
  std::vector<double> thresholds;
  thresholds.reserve(deltas.size());
  for (const double d : deltas) thresholds.push_back(stats.mu + d * norm);

  const auto counts = tail_counts(f, x, thresholds, opts);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    table.rows.push_back({deltas[i], thresholds[i], counts[i],
                          static_cast<double>(counts[i]) / static_cast<double>(x)});
  }
  return table;
}

}  // namespace

TailTable empirical_tail(const AdditiveFunction& f, std::uint64_t x, std::span<const double> deltas,
                         Normalization normalization, const PrimeStats& stats, ValueOptions opts) {
  opts.prime_cap = std::numeric_limits<std::uint64_t>::max();
  return build_table(f, x, deltas, normalization, stats, opts);
}

TailTable empirical_tail(const AdditiveFunction& f, std::uint64_t x, std::span<const double> deltas,
                         Normalization normalization) {
  return empirical_tail(f, x, deltas, normalization, prime_stats(f, x));
}

TailTable truncated_tail(const AdditiveFunction& f, std::uint64_t x, std::uint64_t y,
                         std::span<const double> deltas, Normalization normalization) {
  if (y < 2) throw DomainError("truncated_tail: y must be >= 2");
  if (y > x) throw DomainError("truncated_tail: y must not exceed x");
  // prime_stats needs y >= 3; at y = 2 the sums have a single term.
  PrimeStats stats;
  if (y >= 3) {
    stats = prime_stats(f, y);
  } else {
    const double f2 = f.at_prime(2);
    stats.x = 2;
    stats.pi_x = 1;
    stats.mu = f2 / 2.0;
    stats.B2 = f2 * f2 / 2.0;
    stats.sigma2 = stats.B2 / 2.0;
    stats.loglog_x = std::log(std::log(2.0));
  }
  ValueOptions opts;
  opts.prime_cap = y;
  return build_table(f, x, deltas, normalization, stats, opts);
}

double mean_value_direct(const AdditiveFunction& f, std::uint64_t x, double s,
                         MeanValueOptions opts) {
  if (x < 1) throw DomainError("mean_value_direct: x must be >= 1");
  CompensatedSum total;
  ValueOptions vo;
  vo.segment_size = opts.segment_size;
  additive_values(
      f, x,
      [&](std::uint64_t first_n, std::span<const double> block) {
        CompensatedSum part;
        for (std::size_t i = 0; i < block.size(); ++i) {
          const double e = s * block[i];
          if (std::fabs(e) > opts.max_exponent) {
            throw RangeError("mean_value_direct: exponent s*f(n) overflows at n=" +
                             std::to_string(first_n + i));
          }
          part.add(std::exp(e));
        }
        total.merge(part);
      },
      vo);
  return total.value() / static_cast<double>(x);
}

}  // namespace adlab
