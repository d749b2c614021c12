#include "adlab/lab/commands.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "adlab/coefficients.hpp"
#include "adlab/error.hpp"
#include "adlab/power_series.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/psi.hpp"

namespace adlab::lab {

namespace {

Json header(const char* command, const ExperimentConfig& cfg) {
  return Json{{"command", command}, {"config", config_to_json(cfg)}};
}

// Closed-form Psi for omega and its positive multiples.
std::optional<PsiDistribution> closed_psi(const AdditiveFunction& f) {
  switch (f.kind()) {
    case AdditiveFunction::Kind::kOmega:
      return PsiDistribution::point_mass(1.0);
    case AdditiveFunction::Kind::kScaled: {
      const auto base = closed_psi(f.base());
      if (!base) return std::nullopt;
      return base->rescaled(1.0 / f.scale());
    }
    default:
      return std::nullopt;
  }
}

PsiDistribution resolve_psi(const ExperimentConfig& cfg, const AdditiveFunction& f, std::uint64_t x) {
  switch (cfg.psi) {
    case PsiSource::kClosed: {
      auto psi = closed_psi(f);
      if (!psi) {
        throw ConfigError("no closed-form Psi for function '" + cfg.fn + "'; use --psi empirical or --psi FILE");
      }
      return *psi;
    }
    case PsiSource::kEmpirical:
      return psi_from_prime_data(f, x);
    case PsiSource::kFile:
      return load_psi(cfg.psi_path);
  }
  throw ConfigError("unknown Psi source");
}

const char* psi_source_name(PsiSource s) {
  switch (s) {
    case PsiSource::kClosed:
      return "CLOSED";
    case PsiSource::kEmpirical:
      return "EMPIRICAL";
    case PsiSource::kFile:
      return "FILE";
  }
  return "?";
}

Json psi_block(const ExperimentConfig& cfg, const PsiDistribution& psi) {
  const auto lat = lattice_detect(psi);
  Json j{{"source", psi_source_name(cfg.psi)}, {"m2", moment(psi, 2)}, {"lattice", lat.is_lattice}};
  if (lat.is_lattice) j["span"] = lat.span;
  j["law"] = psi_to_json(psi);
  return j;
}

std::uint64_t default_y(std::uint64_t x) {
  const double lx = std::log(static_cast<double>(x));
  const double y = std::floor(std::exp(lx / std::log(lx)));
  return std::max<std::uint64_t>(3, static_cast<std::uint64_t>(y));
}

CenteredOptions centered_options(const ExperimentConfig& cfg) {
  CenteredOptions o;
  o.method = cfg.method;
  o.samples = cfg.samples;
  o.seed = cfg.seed;
  return o;
}

Json ratio(double num, double den) {
  Json j{{"numerator", num}, {"denominator", den}};
  j["value"] = den != 0.0 ? Json(num / den) : Json(nullptr);
  return j;
}

Json tagged(double value, const char* method) { return Json{{"value", value}, {"method", method}}; }

Json prediction_json(const Prediction& p) {
  Json j = to_json(p);
  j["method"] = "ASYMPTOTIC";
  return j;
}

// FULL inputs built once per x; lattice inputs only when Psi is a lattice law.
struct FullContext {
  FullInputs full;
  std::optional<LatticeInputs> lattice;
  std::shared_ptr<const XhLaw> h_law;
  std::shared_ptr<const AdditiveFunction> g_part;
  double c_uncertainty = 0.0;
  std::size_t h_primes = 0;
};

FullContext make_full_context(const ExperimentConfig& cfg, const AdditiveFunction& f, const PsiDistribution& psi,
                              const PrimeStats& stats) {
  FullContext ctx;
  const auto c = c_constant(f, psi, cfg.c_grid);
  ctx.full.c_f = c.c;
  ctx.c_uncertainty = c.uncertainty;
  const std::uint64_t P = cfg.l_product_P;
  ctx.full.log_L = [f, psi, P](double v) { return L_product(f, psi, v, P).log_value; };
  const auto lat = lattice_detect(psi);
  if (lat.is_lattice) {
    if (std::fabs(lat.span - 1.0) > 1e-9) {
      throw PreconditionError("FULL level needs a lattice span of 1, got " + std::to_string(lat.span) +
                              "; rescale the function, e.g. C*SPEC with C = 1/span");
    }
    const auto split = split_gh(f, std::max(stats.x, P));
    ctx.g_part = std::make_shared<const AdditiveFunction>(split.g_part);
    ctx.h_law = std::make_shared<const XhLaw>(XhLaw::from_function(split.h_part, stats.x));
    ctx.h_primes = ctx.h_law->support_primes().size();
    LatticeInputs li;
    const auto g = ctx.g_part;
    li.log_L_g = [g, psi, P](double v) { return L_product(*g, psi, v, P).log_value; };
    const auto law = ctx.h_law;
    li.p_h = [law](double a, double v) { return p_h_factor(*law, a, v).value; };
    li.mu = stats.mu;
    li.sigma = stats.sigma();
    ctx.lattice = li;
  }
  return ctx;
}

Json full_context_json(const FullContext& ctx, const ExperimentConfig& cfg) {
  Json j{{"c_f", ctx.full.c_f}, {"c_uncertainty", ctx.c_uncertainty}, {"c_grid", cfg.c_grid}, {"P", cfg.l_product_P}};
  j["lattice"] = ctx.lattice.has_value();
  if (ctx.h_law) {
    j["h_primes"] = ctx.h_primes;
    j["h_remainder"] = ctx.h_law->remainder();
  }
  return j;
}

}  // namespace

Artifacts cmd_sieve(const ExperimentConfig& cfg) {
  const auto f = parse_function(cfg.fn);
  const auto stats = prime_stats_grid(f, cfg.x);
  Json s = header("sieve", cfg);
  Json t = header("sieve", cfg);
  s["results"] = Json::array();
  t["results"] = Json::array();
  for (std::size_t i = 0; i < cfg.x.size(); ++i) {
    s["results"].push_back(to_json(stats[i]));
    t["results"].push_back(to_json(empirical_tail(f, cfg.x[i], cfg.deltas, cfg.normalize, stats[i])));
  }
  return {{"stats.json", s}, {"tail.json", t}};
}

Artifacts cmd_tail(const ExperimentConfig& cfg) {
  const auto f = parse_function(cfg.fn);
  Json t = header("tail", cfg);
  t["results"] = Json::array();
  for (const auto x : cfg.x) {
    Json r{{"x", x}, {"empirical", to_json(empirical_tail(f, x, cfg.deltas, cfg.normalize))}};
    if (cfg.y) {
      if (*cfg.y > x) throw ConfigError("y must not exceed x");
      r["y"] = *cfg.y;
      r["truncated"] = to_json(truncated_tail(f, x, *cfg.y, cfg.deltas, cfg.normalize));
    }
    t["results"].push_back(r);
  }
  return {{"tail.json", t}};
}

Artifacts cmd_model(const ExperimentConfig& cfg) {
  const auto f = parse_function(cfg.fn);
  Json m = header("model", cfg);
  m["results"] = Json::array();
  for (const auto x : cfg.x) {
    const auto stats = prime_stats(f, x);
    const auto ens = BernoulliEnsemble::from_function(f, x);
    Json rows = Json::array();
    for (const double d : cfg.deltas) {
      const double thr = cfg.normalize == Normalization::kSigma ? stats.mu + d * stats.sigma() : stats.mu + d * stats.B();
      // centered_tail normalizes by sigma; B normalization maps delta to delta B / sigma.
      const double ds = cfg.normalize == Normalization::kSigma ? d : d * stats.B() / stats.sigma();
      rows.push_back(Json{{"delta", d}, {"threshold", thr}, {"tail", to_json(centered_tail(ens, ds, stats, centered_options(cfg)))}});
    }
    m["results"].push_back(Json{{"x", x},
                                {"normalization", to_string(cfg.normalize)},
                                {"stats", to_json(stats)},
                                {"rows", rows}});
  }
  return {{"model.json", m}};
}

Artifacts cmd_asym(const ExperimentConfig& cfg) {
  const auto f = parse_function(cfg.fn);
  Json a = header("asym", cfg);
  a["results"] = Json::array();
  for (const auto x : cfg.x) {
    const auto psi = resolve_psi(cfg, f, x);
    const auto stats = prime_stats(f, x);
    std::optional<FullContext> ctx;
    if (cfg.level == AsymLevel::kFull) ctx = make_full_context(cfg, f, psi, stats);
    Json rows = Json::array();
    for (const double d : cfg.deltas) {
      Json row{{"delta", d}};
      if (d >= 0.0) row["saddle"] = to_json(v_param(psi, static_cast<double>(x), d));
      if (cfg.level == AsymLevel::kNormal || d > 0.0) {
        const auto p = tail_asymptotic(psi, static_cast<double>(x), d, cfg.level, ctx ? &ctx->full : nullptr,
                                       ctx && ctx->lattice ? &*ctx->lattice : nullptr);
        row["prediction"] = prediction_json(p);
      } else {
        row["prediction"] = nullptr;
        row["note"] = "level requires delta > 0";
      }
      rows.push_back(row);
    }
    Json r{{"x", x}, {"psi", psi_block(cfg, psi)}};
    if (ctx) r["full_inputs"] = full_context_json(*ctx, cfg);
    r["rows"] = rows;
    a["results"].push_back(r);
  }
  return {{"asym.json", a}};
}

Artifacts cmd_series(const ExperimentConfig& cfg) {
  Json s = header("series", cfg);
  const int K = cfg.k;
  if (cfg.psi == PsiSource::kFile) {
    const auto psi = load_psi(cfg.psi_path);
    const auto lam = lambda_psi(psi, K);
    std::vector<double> u1(static_cast<std::size_t>(K) + 1, 0.0);
    double fact = 1.0;
    for (int l = 1; l <= K; ++l) {
      fact *= l;
      u1[static_cast<std::size_t>(l)] = moment(psi, l - 1) / fact;
    }
    const auto rev = reversion_oracle(u1, K);
    double diff = 0.0;
    for (int k = 0; k <= K; ++k) diff = std::max(diff, std::fabs(rev[static_cast<std::size_t>(k)] - lam.values[static_cast<std::size_t>(k)]));
    s["source"] = "psi";
    s["psi"] = psi_block(cfg, psi);
    s["coefficients"] = to_json(lam);
    s["reversion_max_abs_diff"] = diff;
    s["exponent_series"] = exponent_series(psi, std::max(K, 2));
  } else {
    const auto f = parse_function(cfg.fn);
    const auto x = cfg.x.front();
    const auto ens = BernoulliEnsemble::from_function(f, x);
    const auto lam = lambda_f(ens, K);
    std::vector<double> F(static_cast<std::size_t>(K) + 1, 0.0);
    const double B2 = ens.b2();
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const double w = ens.weights()[i];
      double term = w / static_cast<double>(ens.primes()[i]);
      for (int l = 1; l <= K; ++l) {
        term *= w / l;
        F[static_cast<std::size_t>(l)] += term / B2;
      }
    }
    const auto rev = reversion_oracle(F, K);
    double diff = 0.0;
    for (int k = 0; k <= K; ++k) diff = std::max(diff, std::fabs(rev[static_cast<std::size_t>(k)] - lam.values[static_cast<std::size_t>(k)]));
    s["source"] = "function";
    s["x"] = x;
    s["B2"] = B2;
    s["moments"] = moment_sequence(ens, K);
    s["coefficients"] = to_json(lam);
    s["reversion_max_abs_diff"] = diff;
  }
  return {{"series.json", s}};
}

Artifacts cmd_compare(const ExperimentConfig& cfg) {
  const auto f = parse_function(cfg.fn);
  Json c = header("compare", cfg);
  c["results"] = Json::array();
  for (const auto x : cfg.x) {
    const auto stats = prime_stats(f, x);
    const auto psi = resolve_psi(cfg, f, x);
    const auto table = empirical_tail(f, x, cfg.deltas, Normalization::kSigma, stats);
    const auto ens = BernoulliEnsemble::from_function(f, x);
    const std::uint64_t y = cfg.y.value_or(default_y(x));
    if (y > x) throw ConfigError("y must not exceed x");
    const auto stats_y = prime_stats(f, y);
    const auto ens_y = BernoulliEnsemble::from_function(f, y);
    const auto trunc = truncated_tail(f, x, y, cfg.deltas, Normalization::kSigma);
    const auto ctx = make_full_context(cfg, f, psi, stats);
    const double sigma_psi = std::sqrt(moment(psi, 2) * stats.loglog_x);
    const auto opts = centered_options(cfg);

    Json rows = Json::array();
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
      const double d = cfg.deltas[i];
      const auto& er = table.rows[i];
      const auto model = centered_tail(ens, d, stats, opts);
      const auto model_y = centered_tail(ens_y, d, stats_y, opts);
      const double pois = poisson_tail(stats.sigma2, d);

      Json row{{"delta", d}, {"threshold", er.threshold}};
      row["D"] = Json{{"value", er.D}, {"count", er.count}, {"method", "SIEVE"}};
      row["model"] = to_json(model);
      Json preds{{"normal", prediction_json(tail_asymptotic(psi, static_cast<double>(x), d, AsymLevel::kNormal))}};
      if (d > 0.0) {
        preds["s"] = prediction_json(tail_asymptotic(psi, static_cast<double>(x), d, AsymLevel::kSOnly));
        preds["full"] = prediction_json(tail_asymptotic(psi, static_cast<double>(x), d, AsymLevel::kFull, &ctx.full,
                                                        ctx.lattice ? &*ctx.lattice : nullptr));
      } else {
        preds["s"] = nullptr;
        preds["full"] = nullptr;
      }
      row["predictions"] = preds;
      row["poisson"] = tagged(pois, "CLOSED");
      row["truncated_D"] = Json{{"value", trunc.rows[i].D}, {"count", trunc.rows[i].count}, {"method", "SIEVE"}};
      row["truncated_model"] = to_json(model_y);

      Json ratios{{"D_over_model", ratio(er.D, model.value)}};
      if (d >= 0.0) {
        const double z = d / sigma_psi;
        const double A = a_factor(psi, z);
        row["a_factor"] = Json{{"value", A}, {"z", z}, {"method", "CLOSED"}};
        ratios["D_over_A_model"] = ratio(er.D, A * model.value);
      } else {
        row["a_factor"] = nullptr;
        ratios["D_over_A_model"] = nullptr;
      }
      ratios["D_over_poisson"] = ratio(er.D, pois);
      ratios["truncated_D_over_model"] = ratio(trunc.rows[i].D, model_y.value);
      row["ratios"] = ratios;
      rows.push_back(row);
    }
    c["results"].push_back(Json{{"x", x},
                                {"y", y},
                                {"stats", to_json(stats)},
                                {"stats_y", to_json(stats_y)},
                                {"psi", psi_block(cfg, psi)},
                                {"full_inputs", full_context_json(ctx, cfg)},
                                {"rows", rows}});
  }
  return {{"compare.json", c}};
}

std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, doc] : artifacts) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw ConfigError("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

int exit_code_for(const std::exception& e) noexcept {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return 1;
  switch (err->kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kDomain:
    case ErrorKind::kPrecondition:
      return 2;
    case ErrorKind::kNumeric:
    case ErrorKind::kRange:
      return 3;
    case ErrorKind::kResource:
      return 4;
  }
  return 1;
}

}  // namespace adlab::lab
