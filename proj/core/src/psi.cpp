#include "adlab/psi.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "adlab/error.hpp"
#include "adlab/sieve.hpp"
#include "adlab/summation.hpp"

namespace adlab {

namespace {

constexpr int kGaussNodes = 16;

struct GaussRule {
  std::array<double, kGaussNodes> x{};
  std::array<double, kGaussNodes> w{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGaussNodes;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      r.x[static_cast<std::size_t>(i)] = z;
      r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double int_pow(double t, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= t;
  return r;
}

}  // namespace

PsiDistribution::PsiDistribution(std::vector<Atom> atoms, std::vector<Knot> knots,
                                 Provenance provenance)
    : atoms_(std::move(atoms)), knots_(std::move(knots)), provenance_(provenance) {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
  CompensatedSum total;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!(a.t >= 0.0) || !std::isfinite(a.t)) throw DomainError("psi: atom position must be >= 0");
    if (!(a.mass > 0.0)) throw DomainError("psi: atom mass must be > 0");
    if (i > 0 && atoms_[i - 1].t == a.t) throw DomainError("psi: duplicate atom position");
    total.add(a.mass);
  }
  if (!knots_.empty()) {
    if (knots_.size() < 2) throw DomainError("psi: continuous part needs at least two knots");
    if (knots_.front().F != 0.0) throw DomainError("psi: first cdf knot must have F = 0");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      const auto& k = knots_[i];
      if (!(k.t >= 0.0) || !std::isfinite(k.t)) throw DomainError("psi: knot position must be >= 0");
      if (i > 0 && (knots_[i - 1].t >= k.t || knots_[i - 1].F > k.F)) {
        throw DomainError("psi: cdf knots must be strictly ascending in t, nondecreasing in F");
      }
    }
    total.add(knots_.back().F);
  }
  if (std::fabs(total.value() - 1.0) > kMassTolerance) {
    throw DomainError("psi: total mass must be 1 within 1e-12");
  }
  if (!(moment(*this, 2) > 0.0)) throw DomainError("psi: second moment must be positive");
}

PsiDistribution PsiDistribution::point_mass(double t) { return from_atoms({{t, 1.0}}); }

PsiDistribution PsiDistribution::from_atoms(std::vector<Atom> atoms, Provenance provenance) {
  return PsiDistribution(std::move(atoms), {}, provenance);
}

PsiDistribution PsiDistribution::uniform(double a, double b) {
  if (!(b > a) || a < 0.0) throw DomainError("psi: uniform needs 0 <= a < b");
  return PsiDistribution({}, {{a, 0.0}, {b, 1.0}});
}

double PsiDistribution::continuous_mass() const noexcept {
  return knots_.empty() ? 0.0 : knots_.back().F;
}

double PsiDistribution::support_max() const noexcept {
  double m = 0.0;
  if (!atoms_.empty()) m = atoms_.back().t;
  if (!knots_.empty()) m = std::max(m, knots_.back().t);
  return m;
}

PsiDistribution PsiDistribution::rescaled(double alpha) const {
  if (!(alpha > 0.0)) throw DomainError("psi: rescale factor must be > 0");
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const auto& a : atoms_) atoms.push_back({a.t / alpha, a.mass});
  std::vector<Knot> knots;
  knots.reserve(knots_.size());
  for (const auto& k : knots_) knots.push_back({k.t / alpha, k.F});
  return PsiDistribution(std::move(atoms), std::move(knots), provenance_);
}

const char* to_string(PsiDistribution::Provenance p) noexcept {
  switch (p) {
    case PsiDistribution::Provenance::kClosed:
      return "CLOSED";
    case PsiDistribution::Provenance::kEmpirical:
      return "EMPIRICAL";
    case PsiDistribution::Provenance::kFile:
      return "FILE";
  }
  return "?";
}

std::complex<double> laplace(const PsiDistribution& psi, std::complex<double> z, int order,
                             LaplaceOptions opts) {
  if (order < 0 || order > 2) throw DomainError("laplace: order must be 0, 1 or 2");
  if (std::fabs(z.real()) > opts.max_abs_re) throw DomainError("laplace: |Re z| exceeds bound");
  if (psi.support_max() * z.real() > opts.max_exponent) {
    throw RangeError("laplace: t * Re z exceeds the exponent bound");
  }
  if (z == std::complex<double>(0.0, 0.0)) {
    return {moment(psi, order), 0.0};
  }
  std::complex<double> sum = 0.0;
  for (const auto& a : psi.atoms()) {
    sum += a.mass * int_pow(a.t, order) * std::exp(z * a.t);
  }
  const auto& knots = psi.knots();
  const auto& rule = gauss_rule();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double lo = knots[i - 1].t;
    const double hi = knots[i].t;
    const double density = (knots[i].F - knots[i - 1].F) / (hi - lo);
    if (density == 0.0) continue;
    // Subdivide so that |z| * width <= 2 on each panel.
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(z) * (hi - lo) / 2.0)));
    const double width = (hi - lo) / panels;
    std::complex<double> piece = 0.0;
    for (int j = 0; j < panels; ++j) {
      const double mid = lo + (j + 0.5) * width;
      std::complex<double> panel = 0.0;
      for (int q = 0; q < kGaussNodes; ++q) {
        const double t = mid + 0.5 * width * rule.x[static_cast<std::size_t>(q)];
        panel += rule.w[static_cast<std::size_t>(q)] * int_pow(t, order) * std::exp(z * t);
      }
      piece += 0.5 * width * panel;
    }
    sum += density * piece;
  }
  return sum;
}

double laplace(const PsiDistribution& psi, double z, int order, LaplaceOptions opts) {
  return laplace(psi, std::complex<double>(z, 0.0), order, opts).real();
}

double moment(const PsiDistribution& psi, int k) {
  if (k < 0 || k > 64) throw DomainError("moment: order must be in [0, 64]");
  CompensatedSum sum;
  for (const auto& a : psi.atoms()) sum.add(a.mass * int_pow(a.t, k));
  const auto& knots = psi.knots();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double lo = knots[i - 1].t;
    const double hi = knots[i].t;
    const double density = (knots[i].F - knots[i - 1].F) / (hi - lo);
    sum.add(density * (int_pow(hi, k + 1) - int_pow(lo, k + 1)) / (k + 1));
  }
  return sum.value();
}

LatticeReport lattice_detect(const std::vector<double>& points, LatticeOptions opts) {
  if (!(opts.tol > 0.0)) throw DomainError("lattice_detect: tol must be > 0");
  const double max_index = opts.max_index > 0.0 ? opts.max_index : std::floor(1.0 / std::sqrt(opts.tol));
  std::vector<double> pts;
  for (const double t : points) {
    if (std::fabs(t) > opts.tol) pts.push_back(std::fabs(t));
  }
  LatticeReport report;
  if (pts.empty()) return report;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [&](double a, double b) { return b - a <= opts.tol; }),
            pts.end());

  auto on_lattice = [&](double t, double span) {
    const double idx = std::round(t / span);
    return idx <= max_index && std::fabs(t - idx * span) <= opts.tol * std::max(1.0, idx);
  };

  double span = pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double a = std::max(span, pts[i]);
    double b = std::min(span, pts[i]);
    bool found = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const double r = std::fabs(a - b * std::round(a / b));
      if (r <= opts.tol) {
        found = true;
        break;
      }
      a = b;
      b = r;
    }
    bool ok = found;
    if (ok && std::fabs(b - span) <= opts.tol) {
      b = span;
      ok = on_lattice(pts[i], b);
    } else if (ok) {
      for (std::size_t j = 0; j <= i && ok; ++j) ok = on_lattice(pts[j], b);
    }
    if (!ok) {
      report.witness = std::make_pair(pts.front(), pts[i]);
      return report;
    }
    span = b;
  }
  report.is_lattice = true;
  report.span = span;
  return report;
}

LatticeReport lattice_detect(const PsiDistribution& psi, LatticeOptions opts) {
  if (psi.has_continuous_part()) return {};
  std::vector<double> points;
  points.reserve(psi.atoms().size());
  for (const auto& a : psi.atoms()) points.push_back(a.t);
  return lattice_detect(points, opts);
}

PsiDistribution psi_from_prime_data(const AdditiveFunction& f, std::uint64_t x, double gap) {
  std::vector<double> values;
  for_each_prime(x, [&](std::uint64_t p) { values.push_back(f.at_prime(p)); });
  std::sort(values.begin(), values.end());
  const double weight = 1.0 / static_cast<double>(values.size());
  std::vector<PsiDistribution::Atom> atoms;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] - values[i - 1] > gap) {
      const auto n = static_cast<double>(i - start);
      atoms.push_back({values[start], n * weight});
      start = i;
    }
  }
  // Masses are k / pi(x); rounding can leave the total off by a few ulps.
  CompensatedSum total;
  for (const auto& a : atoms) total.add(a.mass);
  const double fix = 1.0 / total.value();
  for (auto& a : atoms) a.mass *= fix;
  return PsiDistribution::from_atoms(std::move(atoms), PsiDistribution::Provenance::kEmpirical);
}

}  // namespace adlab
