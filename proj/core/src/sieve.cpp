#include "adlab/sieve.hpp"

#include <algorithm>
#include <cmath>

#include "adlab/error.hpp"

namespace adlab {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Plain sieve of Eratosthenes for the base primes <= limit.
std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::size_t checked_segment(std::size_t s) {
  if (s < 64) throw ConfigError("segment size must be at least 64");
  return s;
}

template <typename Rem>
void additive_values_impl(const AdditiveFunction& f, std::uint64_t x, const ValueBlockVisitor& visit,
                          const ValueOptions& opts) {
  const std::size_t seg = checked_segment(opts.segment_size);
  const auto base = small_primes(isqrt(x));
  std::vector<double> base_values(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) base_values[i] = f.at_prime(base[i]);

  std::vector<Rem> rem(seg);
  std::vector<double> values(seg);
  for (std::uint64_t lo = 1; lo <= x; lo += seg) {
    const std::uint64_t hi = std::min<std::uint64_t>(x, lo + seg - 1);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    for (std::size_t i = 0; i < len; ++i) {
      rem[i] = static_cast<Rem>(lo + i);
      values[i] = 0.0;
    }
    for (std::size_t k = 0; k < base.size(); ++k) {
      const std::uint64_t p = base[k];
      if (p * p > hi) break;
      const bool counted = p <= opts.prime_cap;
      const double fp = base_values[k];
      const std::uint64_t first = ((lo + p - 1) / p) * p;
      for (std::uint64_t m = first; m <= hi; m += p) {
        const std::size_t i = static_cast<std::size_t>(m - lo);
        Rem r = rem[i] / static_cast<Rem>(p);
        while (r % p == 0) r /= static_cast<Rem>(p);
        rem[i] = r;
        if (counted) values[i] += fp;
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t q = rem[i];
      if (q > 1 && q <= opts.prime_cap) values[i] += f.at_prime(q);
    }
    visit(lo, std::span<const double>(values.data(), len));
  }
}

}  // namespace

void for_each_prime(std::uint64_t x, const std::function<void(std::uint64_t)>& visit,
                    SieveOptions opts) {
  if (x < 2) throw DomainError("sieve: x must be >= 2");
  // Odd-only segments: slot i of a segment starting at odd lo stands for lo + 2 i.
  const std::size_t slots = std::max<std::size_t>(checked_segment(opts.segment_size) / 2, 32);
  const auto base = small_primes(isqrt(x));
  visit(2);
  std::vector<unsigned char> is_prime(slots);
  for (std::uint64_t lo = 3; lo <= x; lo += 2 * slots) {
    const std::uint64_t hi = std::min<std::uint64_t>(x, lo + 2 * (slots - 1));
    const std::size_t len = static_cast<std::size_t>((hi - lo) / 2 + 1);
    std::fill(is_prime.begin(), is_prime.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (std::size_t k = 1; k < base.size(); ++k) {
      const std::uint64_t p = base[k];
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (std::size_t i = static_cast<std::size_t>((start - lo) / 2); i < len; i += p) is_prime[i] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (is_prime[i]) visit(lo + 2 * i);
    }
  }
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t x, SieveOptions opts) {
  std::vector<std::uint64_t> out;
  if (x >= 2) {
    // pi(x) < 1.26 x / log x for x >= 17
    const double lx = std::log(static_cast<double>(std::max<std::uint64_t>(x, 17)));
    out.reserve(static_cast<std::size_t>(1.26 * static_cast<double>(x) / lx) + 8);
  }
  for_each_prime(x, [&](std::uint64_t p) { out.push_back(p); }, opts);
  return out;
}

void additive_values(const AdditiveFunction& f, std::uint64_t x, const ValueBlockVisitor& visit,
                     ValueOptions opts) {
  if (x < 1) throw DomainError("additive_values: x must be >= 1");
  if (x < (std::uint64_t{1} << 32)) {
    additive_values_impl<std::uint32_t>(f, x, visit, opts);
  } else {
    additive_values_impl<std::uint64_t>(f, x, visit, opts);
  }
}

std::vector<double> additive_values_vector(const AdditiveFunction& f, std::uint64_t x,
                                           ValueOptions opts) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x));
  additive_values(
      f, x, [&](std::uint64_t, std::span<const double> block) {
        out.insert(out.end(), block.begin(), block.end());
      },
      opts);
  return out;
}

}  // namespace adlab
