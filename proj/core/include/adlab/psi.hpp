#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "adlab/additive_function.hpp"

namespace adlab {

// A compactly supported distribution on [0, T_max]: finitely many atoms plus
// an optional absolutely continuous part with piecewise-linear CDF.
class PsiDistribution {
 public:
  enum class Provenance { kClosed, kEmpirical, kFile };

  struct Atom {
    double t;
    double mass;
  };

  // Cumulative continuous mass at t; the first knot carries F = 0.
  struct Knot {
    double t;
    double F;
  };

  static constexpr double kMassTolerance = 1e-12;

  PsiDistribution(std::vector<Atom> atoms, std::vector<Knot> knots,
                  Provenance provenance = Provenance::kClosed);

  static PsiDistribution point_mass(double t);
  static PsiDistribution from_atoms(std::vector<Atom> atoms,
                                    Provenance provenance = Provenance::kClosed);
  // Uniform law on [a, b].
  static PsiDistribution uniform(double a, double b);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }
  Provenance provenance() const noexcept { return provenance_; }
  bool has_continuous_part() const noexcept { return !knots_.empty(); }
  double continuous_mass() const noexcept;
  double support_max() const noexcept;

  // Law of X / alpha when X ~ this, i.e. t -> Psi(alpha t).
  PsiDistribution rescaled(double alpha) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Knot> knots_;
  Provenance provenance_;
};

const char* to_string(PsiDistribution::Provenance p) noexcept;

struct LaplaceOptions {
  double max_abs_re = 64.0;
  double max_exponent = 700.0;
};

// order 0, 1, 2: Psi^(z), Psi^'(z), Psi^''(z) where Psi^(z) = integral e^{zt} dPsi(t).
std::complex<double> laplace(const PsiDistribution& psi, std::complex<double> z, int order,
                             LaplaceOptions opts = {});
double laplace(const PsiDistribution& psi, double z, int order, LaplaceOptions opts = {});

// integral t^k dPsi(t), 0 <= k <= 64.
double moment(const PsiDistribution& psi, int k);

struct LatticeReport {
  bool is_lattice = false;
  double span = 0.0;
  std::optional<std::pair<double, double>> witness;
};

struct LatticeOptions {
  double tol = 1e-9;
  int max_iterations = 64;
  // Largest admissible multiple t / span; 0 selects floor(1 / sqrt(tol)).
  double max_index = 0.0;
};

// Largest span alpha such that every atom lies within tol of alpha * Z,
// found by a tolerant real Euclidean algorithm.
LatticeReport lattice_detect(const PsiDistribution& psi, LatticeOptions opts = {});
LatticeReport lattice_detect(const std::vector<double>& points, LatticeOptions opts = {});

// Empirical law of {f(p) : p <= x} with weights 1/pi(x); values closer than
// gap merge into one atom.
PsiDistribution psi_from_prime_data(const AdditiveFunction& f, std::uint64_t x, double gap = 1e-9);

}  // namespace adlab
