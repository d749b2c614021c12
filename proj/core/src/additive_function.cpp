#include "adlab/additive_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "adlab/error.hpp"
#include "adlab/sieve.hpp"

namespace adlab {

namespace {

constexpr std::uint64_t kMaxAlphaDen = std::uint64_t{1} << 62;

std::string format_prime(std::uint64_t p) { return std::to_string(p); }

}  // namespace

double frac_part_scaled(std::uint64_t num, std::uint64_t den, std::uint64_t p) noexcept {
  __extension__ using u128 = unsigned __int128;
  const u128 r = (static_cast<u128>(num % den) * static_cast<u128>(p % den)) % den;
  return static_cast<double>(static_cast<long double>(static_cast<std::uint64_t>(r)) /
                             static_cast<long double>(den));
}

AdditiveFunction AdditiveFunction::omega() {
  AdditiveFunction f;
  f.kind_ = Kind::kOmega;
  f.name_ = "omega";
  return f;
}

AdditiveFunction AdditiveFunction::frac_alpha(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || den > kMaxAlphaDen) {
    throw DomainError("frac_alpha: denominator must be in [1, 2^62]");
  }
  if (num % den == 0) {
    throw DomainError("frac_alpha: alpha must not be an integer");
  }
  AdditiveFunction f;
  f.kind_ = Kind::kFracAlpha;
  f.num_ = num;
  f.den_ = den;
  f.name_ = "frac:" + std::to_string(num) + "/" + std::to_string(den);
  return f;
}

AdditiveFunction AdditiveFunction::table(std::vector<TableEntry> entries, std::string name) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.p < 2) throw ConfigError("table: entry p=" + format_prime(e.p) + " is not a prime");
    if (i > 0 && entries[i - 1].p >= e.p) {
      throw ConfigError("table: primes must be strictly ascending at p=" + format_prime(e.p));
    }
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
      throw ConfigError("table: value at p=" + format_prime(e.p) + " must be finite and >= 0");
    }
  }
  AdditiveFunction f;
  f.kind_ = Kind::kTable;
  f.name_ = std::move(name);
  f.table_ = std::make_shared<const std::vector<TableEntry>>(std::move(entries));
  return f;
}

AdditiveFunction AdditiveFunction::scaled(const AdditiveFunction& base, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled: factor must be finite and > 0");
  AdditiveFunction f;
  f.kind_ = Kind::kScaled;
  f.scale_ = c;
  f.base_ = std::make_shared<const AdditiveFunction>(base);
  std::ostringstream os;
  os.precision(17);
  os << c << "*" << base.name();
  f.name_ = os.str();
  return f;
}

AdditiveFunction AdditiveFunction::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path.string());
  std::vector<TableEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected p<TAB>value");
    }
    try {
      std::size_t used = 0;
      const std::uint64_t p = std::stoull(line.substr(0, tab), &used);
      const double value = std::stod(line.substr(tab + 1));
      entries.push_back({p, value});
    } catch (const std::logic_error&) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed entry");
    }
  }
  return table(std::move(entries), path.stem().string());
}

double AdditiveFunction::at_prime(std::uint64_t p) const {
  switch (kind_) {
    case Kind::kOmega:
      return 1.0;
    case Kind::kFracAlpha:
      return frac_part_scaled(num_, den_, p);
    case Kind::kTable: {
      const auto& t = *table_;
      auto it = std::lower_bound(t.begin(), t.end(), p,
                                 [](const TableEntry& e, std::uint64_t q) { return e.p < q; });
      if (it == t.end() || it->p != p) {
        throw ConfigError("table '" + name_ + "' has no value for prime " + format_prime(p));
      }
      return it->value;
    }
    case Kind::kScaled:
      return scale_ * base_->at_prime(p);
  }
  return 0.0;
}

std::uint64_t AdditiveFunction::coverage_limit() const noexcept {
  switch (kind_) {
    case Kind::kTable:
      return table_->empty() ? 0 : table_->back().p;
    case Kind::kScaled:
      return base_->coverage_limit();
    default:
      return std::numeric_limits<std::uint64_t>::max();
  }
}

void AdditiveFunction::require_positive(std::uint64_t x) const {
  for_each_prime(x, [&](std::uint64_t p) {
    if (at_prime(p) == 0.0) {
      throw DomainError("function '" + name_ + "' vanishes at prime " + format_prime(p));
    }
  });
}

}  // namespace adlab
