#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adlab/additive_function.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/sieve.hpp"

namespace adlab {

enum class Normalization { kSigma, kB };

const char* to_string(Normalization n) noexcept;

struct TailRow {
  double delta = 0.0;
  double threshold = 0.0;
  std::uint64_t count = 0;
  double D = 0.0;
};

// Rows hold #{n <= x : f(n) >= mu + delta * norm} / floor(x).
struct TailTable {
  std::uint64_t x = 0;
  Normalization normalization = Normalization::kSigma;
  double mu = 0.0;
  double norm = 0.0;
  std::vector<TailRow> rows;
};

// Counts #{n <= x : f(n) >= t} for each ascending raw threshold t.
std::vector<std::uint64_t> tail_counts(const AdditiveFunction& f, std::uint64_t x,
                                       std::span<const double> thresholds, ValueOptions opts = {});

// D_f(x; delta) (kSigma) or D_f^x(x; delta) (kB). deltas ascending, nonempty.
TailTable empirical_tail(const AdditiveFunction& f, std::uint64_t x, std::span<const double> deltas,
                         Normalization normalization, const PrimeStats& stats,
                         ValueOptions opts = {});
TailTable empirical_tail(const AdditiveFunction& f, std::uint64_t x, std::span<const double> deltas,
                         Normalization normalization);

// Tail of the truncated function f(n; y) = sum_{p | n, p <= y} f(p) over n <= x,
// normalized by the prime statistics at y.
TailTable truncated_tail(const AdditiveFunction& f, std::uint64_t x, std::uint64_t y,
                         std::span<const double> deltas, Normalization normalization);

struct MeanValueOptions {
  std::size_t segment_size = kDefaultSegmentSize;
  double max_exponent = 700.0;
};

// (1/floor(x)) sum_{n <= x} exp(s f(n)). RangeError if |s f(n)| exceeds the
// exponent bound for some n.
double mean_value_direct(const AdditiveFunction& f, std::uint64_t x, double s,
                         MeanValueOptions opts = {});

}  // namespace adlab
