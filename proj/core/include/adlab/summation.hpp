#pragma once

#include <cmath>

namespace adlab {

// Neumaier variant of Kahan summation. Order of add() calls is part of the
// result, so callers feed terms in a fixed order (ascending p everywhere).
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double term) noexcept {
    add(term);
    return *this;
  }

  // Merges another partial sum; used for deterministic per-segment reduction.
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace adlab
