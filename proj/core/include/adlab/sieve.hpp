#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "adlab/additive_function.hpp"

namespace adlab {

inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 22;

// Integers covered per prime-sieve segment; odd-only storage uses half as many bytes.
inline constexpr std::size_t kDefaultSieveSegment = std::size_t{1} << 19;

struct SieveOptions {
  std::size_t segment_size = kDefaultSieveSegment;
};

// Primes <= x in ascending order. x >= 2, else DomainError.
std::vector<std::uint64_t> sieve_primes(std::uint64_t x, SieveOptions opts = {});

// Streams primes <= x in ascending order without materializing them.
void for_each_prime(std::uint64_t x, const std::function<void(std::uint64_t)>& visit,
                    SieveOptions opts = {});

struct ValueOptions {
  std::size_t segment_size = kDefaultSegmentSize;
  // Only primes <= prime_cap contribute: f(n; y) = sum over p | n, p <= y.
  std::uint64_t prime_cap = std::numeric_limits<std::uint64_t>::max();
};

// Receives consecutive blocks of f(n), the first entry being f(first_n).
using ValueBlockVisitor = std::function<void(std::uint64_t first_n, std::span<const double> values)>;

// Streams f(1), f(2), ..., f(x) in ascending blocks. f(1) = 0.
void additive_values(const AdditiveFunction& f, std::uint64_t x, const ValueBlockVisitor& visit,
                     ValueOptions opts = {});

// Convenience for small x: the whole vector f(1..x) (index 0 holds f(1)).
std::vector<double> additive_values_vector(const AdditiveFunction& f, std::uint64_t x,
                                           ValueOptions opts = {});

}  // namespace adlab
