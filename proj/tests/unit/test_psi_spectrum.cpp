#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "adlab/error.hpp"
#include "adlab/psi.hpp"
#include "oracles.hpp"

using namespace adlab;
using cd = std::complex<double>;

namespace {

PsiDistribution two_atoms() { return PsiDistribution::from_atoms({{1.0, 0.5}, {2.0, 0.5}}); }

// Half atom at 0.5, half uniform on [1, 3].
PsiDistribution mixed() { return PsiDistribution({{0.5, 0.5}}, {{1.0, 0.0}, {3.0, 0.5}}); }

// Closed-form transform of mixed(): 0.5 e^{z/2} + 0.25 (e^{3z} - e^z) / z.
cd mixed_laplace(cd z) { return 0.5 * std::exp(0.5 * z) + 0.25 * (std::exp(3.0 * z) - std::exp(z)) / z; }

}  // namespace

TEST_CASE("PsiDistribution validation") {
  CHECK_THROWS_AS(PsiDistribution::from_atoms({{1.0, 0.5}, {2.0, 0.4}}), DomainError);
  CHECK_THROWS_AS(PsiDistribution::from_atoms({{-1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(PsiDistribution::from_atoms({{0.0, 1.0}}), DomainError);  // zero second moment
  CHECK_THROWS_AS(PsiDistribution::from_atoms({{1.0, 0.5}, {1.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(PsiDistribution({}, {{0.0, 0.1}, {1.0, 1.0}}), DomainError);  // first knot F != 0
  CHECK_NOTHROW(PsiDistribution::from_atoms({{2.0, 0.5}, {1.0, 0.5}}));            // sorted internally
  CHECK(mixed().continuous_mass() == doctest::Approx(0.5));
  CHECK(mixed().support_max() == 3.0);
}

TEST_CASE("laplace closed forms") {
  const auto a1 = PsiDistribution::point_mass(1.0);
  for (const cd z : {cd(0.3, 0.0), cd(-1.2, 0.7), cd(2.5, -3.0), cd(0.0, 5.0)}) {
    CHECK(std::abs(laplace(a1, z, 0) - std::exp(z)) <= 1e-15 * std::abs(std::exp(z)));
    CHECK(std::abs(laplace(a1, z, 2) - std::exp(z)) <= 1e-15 * std::abs(std::exp(z)));
  }
  const auto a = PsiDistribution::point_mass(0.75);
  CHECK(laplace(a, 1.3, 0) == doctest::Approx(std::exp(0.75 * 1.3)).epsilon(1e-15));
  CHECK(laplace(a, 1.3, 1) == doctest::Approx(0.75 * std::exp(0.75 * 1.3)).epsilon(1e-15));

  const auto m = mixed();
  for (const cd z : {cd(0.4, 0.0), cd(-2.0, 1.0), cd(3.0, 4.0), cd(10.0, 0.0), cd(0.0, 25.0)}) {
    const cd ref = mixed_laplace(z);
    CHECK(std::abs(laplace(m, z, 0) - ref) <= 1e-13 * std::abs(ref));
  }
}

TEST_CASE("laplace at zero gives moments") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto psi = oracle::random_atomic_psi(rng, 1 + i % 5);
    CHECK(laplace(psi, 0.0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(laplace(psi, 0.0, 1) - moment(psi, 1)) <= 1e-14 * moment(psi, 1));
    CHECK(std::fabs(laplace(psi, 0.0, 2) - moment(psi, 2)) <= 1e-14 * moment(psi, 2));
  }
  CHECK(laplace(mixed(), 0.0, 0) == 1.0);
}

TEST_CASE("laplace derivative consistency with quadratic decay") {
  std::mt19937_64 rng(5);
  const auto psi = oracle::random_atomic_psi(rng, 4);
  for (const auto& p : {psi, mixed()}) {
    for (const double z : {-1.0, 0.5, 2.0}) {
      auto err = [&](double h, int order) {
        const double fd = (laplace(p, z + h, order - 1) - laplace(p, z - h, order - 1)) / (2 * h);
        return std::fabs(fd - laplace(p, z, order));
      };
      for (int order : {1, 2}) {
        const double e1 = err(1e-2, order);
        const double e2 = err(1e-3, order);
        CHECK(e1 / e2 == doctest::Approx(100.0).epsilon(0.05));
        CHECK(err(1e-4, order) <= 1e-6 * std::fabs(laplace(p, z, order)));
        CHECK(err(1e-5, order) <= 1e-7 * std::fabs(laplace(p, z, order)));
      }
    }
  }
}

TEST_CASE("laplace rescaling identity") {
  std::mt19937_64 rng(17);
  const auto base = oracle::random_atomic_psi(rng, 3);
  for (const auto& psi : {base, mixed()}) {
    for (const double alpha : {0.5, 2.0, 3.7}) {
      const auto r = psi.rescaled(alpha);  // law of X / alpha
      for (double z = -3.0; z <= 3.0; z += 0.5) {
        const double lhs = laplace(r, z, 0);
        const double rhs = laplace(psi, z / alpha, 0);
        CHECK(std::fabs(lhs - rhs) <= 1e-13 * rhs);
        const double d1 = laplace(r, z, 1);
        CHECK(std::fabs(d1 - laplace(psi, z / alpha, 1) / alpha) <= 1e-13 * std::fabs(d1) + 1e-15);
      }
    }
  }
}

TEST_CASE("laplace errors") {
  const auto a = PsiDistribution::point_mass(20.0);
  CHECK_THROWS_AS(laplace(a, cd(65.0, 0.0), 0), DomainError);
  CHECK_THROWS_AS(laplace(a, 40.0, 0), RangeError);
  CHECK_THROWS_AS(laplace(a, 1.0, 3), DomainError);
}

TEST_CASE("moments") {
  const auto a1 = PsiDistribution::point_mass(1.0);
  for (int k = 0; k <= 64; ++k) CHECK(moment(a1, k) == 1.0);
  CHECK(moment(two_atoms(), 2) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(moment(PsiDistribution::uniform(0.0, 1.0), 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(moment(PsiDistribution::uniform(0.0, 1.0), 7) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(moment(mixed(), 3) == doctest::Approx(0.5 * 0.125 + 0.25 * (81.0 - 1.0) / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(moment(a1, 65), DomainError);
  CHECK_THROWS_AS(moment(a1, -1), DomainError);
}

TEST_CASE("lattice detection") {
  auto r = lattice_detect(two_atoms());
  CHECK(r.is_lattice);
  CHECK(r.span == doctest::Approx(1.0));
  r = lattice_detect(PsiDistribution::point_mass(0.5));
  CHECK(r.is_lattice);
  CHECK(r.span == 0.5);
  const auto irr = PsiDistribution::from_atoms({{1.0, 0.5}, {1.4142135623730950488, 0.5}});
  r = lattice_detect(irr);
  CHECK_FALSE(r.is_lattice);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->first == 1.0);
  CHECK_FALSE(lattice_detect(mixed()).is_lattice);

  const auto base = PsiDistribution::from_atoms({{1.0, 0.25}, {2.5, 0.25}, {4.0, 0.5}});
  const auto b = lattice_detect(base);
  REQUIRE(b.is_lattice);
  CHECK(b.span == doctest::Approx(0.5).epsilon(1e-12));
  for (const double c : {0.3, 2.0, 7.0}) {
    const auto s = lattice_detect(base.rescaled(1.0 / c));  // atoms scaled by c
    REQUIRE(s.is_lattice);
    CHECK(s.span == doctest::Approx(c * b.span).epsilon(1e-12));
  }
}

TEST_CASE("psi_from_prime_data") {
  const auto om = psi_from_prime_data(AdditiveFunction::omega(), 1000);
  REQUIRE(om.atoms().size() == 1);
  CHECK(om.atoms()[0].t == 1.0);
  CHECK(om.provenance() == PsiDistribution::Provenance::kEmpirical);

  const auto tb = AdditiveFunction::table({{2, 0.5}, {3, 1.0}, {5, 1.0}, {7, 1.0}});
  const auto p = psi_from_prime_data(tb, 10);
  REQUIRE(p.atoms().size() == 2);
  CHECK(p.atoms()[0].t == 0.5);
  CHECK(p.atoms()[0].mass == doctest::Approx(0.25));
  CHECK(p.atoms()[1].mass == doctest::Approx(0.75));

  // Equidistribution of {alpha p}: Kolmogorov distance to uniform shrinks with x.
  const auto fr = AdditiveFunction::frac_alpha(1414213562373095ULL, 1000000000000000ULL);
  double prev = 1.0;
  for (std::uint64_t x : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    const auto psi = psi_from_prime_data(fr, x);
    double cum = 0.0;
    double ks = 0.0;
    for (const auto& a : psi.atoms()) {
      ks = std::max(ks, std::fabs(cum - a.t));
      cum += a.mass;
      ks = std::max(ks, std::fabs(cum - a.t));
    }
    CHECK(ks < prev);
    prev = ks;
  }
  CHECK(prev < 0.01);
}
