#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace adlab {

// A strongly additive function, determined by its values on primes:
// f(p^k) = f(p) and f(mn) = f(m) + f(n) for coprime m, n.
class AdditiveFunction {
 public:
  enum class Kind { kOmega, kFracAlpha, kTable, kScaled };

  struct TableEntry {
    std::uint64_t p;
    double value;
  };

  // f(p) = 1, i.e. omega(n), the number of distinct prime factors.
  static AdditiveFunction omega();

  // f(p) = {alpha * p} with alpha = num / den, den <= 2^62. The fractional
  // part is computed exactly in 128-bit integer arithmetic.
  static AdditiveFunction frac_alpha(std::uint64_t num, std::uint64_t den);

  // Table-backed values. Entries must be strictly ascending in p with
  // nonnegative values.
  static AdditiveFunction table(std::vector<TableEntry> entries, std::string name = "table");

  // c * base, c > 0.
  static AdditiveFunction scaled(const AdditiveFunction& base, double c);

  // Reads the two-column `p<TAB>value` format ('#' starts a comment).
  static AdditiveFunction load_table(const std::filesystem::path& path);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  // Value at a prime. TABLE functions throw ConfigError naming p when p is
  // not covered.
  double at_prime(std::uint64_t p) const;

  // Largest prime for which a TABLE-backed function (possibly scaled) is
  // defined; UINT64_MAX for closed-form kinds.
  std::uint64_t coverage_limit() const noexcept;

  // For kFracAlpha.
  std::uint64_t alpha_num() const noexcept { return num_; }
  std::uint64_t alpha_den() const noexcept { return den_; }
  // For kScaled.
  double scale() const noexcept { return scale_; }
  const AdditiveFunction& base() const { return *base_; }
  // For kTable.
  const std::vector<TableEntry>& entries() const { return *table_; }

  // Throws DomainError if some prime p <= x has f(p) == 0. Class-C style
  // experiments require strictly positive prime values.
  void require_positive(std::uint64_t x) const;

 private:
  AdditiveFunction() = default;

  Kind kind_ = Kind::kOmega;
  std::string name_;
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
  std::shared_ptr<const std::vector<TableEntry>> table_;
  std::shared_ptr<const AdditiveFunction> base_;
  double scale_ = 1.0;
};

// {num * p / den} exactly, returned as a double in [0, 1).
double frac_part_scaled(std::uint64_t num, std::uint64_t den, std::uint64_t p) noexcept;

}  // namespace adlab
