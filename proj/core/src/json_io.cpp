#include "adlab/json_io.hpp"

#include <fstream>

#include "adlab/error.hpp"

namespace adlab {

Json to_json(const PrimeStats& s) {
  return Json{{"x", s.x}, {"pi_x", s.pi_x}, {"mu", s.mu}, {"sigma2", s.sigma2}, {"B2", s.B2}, {"loglog_x", s.loglog_x}};
}

Json to_json(const TailTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"delta", r.delta}, {"threshold", r.threshold}, {"count", r.count}, {"D", r.D}});
  }
  return Json{{"x", t.x}, {"normalization", to_string(t.normalization)}, {"mu", t.mu}, {"norm", t.norm}, {"rows", rows}};
}

Json to_json(const TailEstimate& e) {
  Json j{{"value", e.value}, {"method", to_string(e.method)}};
  if (e.std_error) j["stderr"] = *e.std_error;
  if (e.samples) j["samples"] = *e.samples;
  if (e.seed) j["seed"] = *e.seed;
  if (e.grid_step) j["grid_step"] = *e.grid_step;
  if (e.remainder_bound) j["remainder_bound"] = *e.remainder_bound;
  if (e.snap_error) j["snap_error"] = *e.snap_error;
  return j;
}

Json to_json(const Prediction& p) {
  Json j{{"delta", p.delta},
         {"v", p.v},
         {"level", to_string(p.level)},
         {"regime", p.regime},
         {"extrapolated", p.extrapolated},
         {"log_prediction", p.prediction.log}};
  if (p.prediction.value) j["prediction"] = *p.prediction.value;
  Json factors = Json::object();
  if (p.L) factors["L"] = *p.L;
  if (p.exp_minus_vc) factors["exp_minus_vc"] = *p.exp_minus_vc;
  if (p.inv_gamma) factors["inv_gamma"] = *p.inv_gamma;
  if (p.P_h) factors["P_h"] = *p.P_h;
  j["factors"] = factors;
  return j;
}

Json to_json(const CoefficientVector& c) {
  return Json{{"kind", to_string(c.kind)}, {"K", c.K()}, {"growth_estimate", c.growth_bound}, {"values", c.values}};
}

Json to_json(const SaddleSolution& s) {
  Json j{{"x", s.x},
         {"delta", s.delta},
         {"sigma_psi", s.sigma_psi},
         {"v", s.v},
         {"psi_hat", s.psi_hat},
         {"psi_hat_1", s.psi_hat_1},
         {"psi_hat_2", s.psi_hat_2},
         {"newton_iters", s.newton_iters},
         {"residual", s.residual}};
  if (s.S) {
    j["log_S"] = s.S->log;
    if (s.S->value) j["S"] = *s.S->value;
  }
  return j;
}

Json psi_to_json(const PsiDistribution& psi) {
  Json atoms = Json::array();
  for (const auto& a : psi.atoms()) atoms.push_back(Json{{"t", a.t}, {"mass", a.mass}});
  Json knots = Json::array();
  for (const auto& k : psi.knots()) knots.push_back(Json::array({k.t, k.F}));
  return Json{{"atoms", atoms}, {"cdf_knots", knots}};
}

PsiDistribution psi_from_json(const Json& j, PsiDistribution::Provenance provenance) {
  if (!j.is_object()) throw ConfigError("Psi JSON must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "atoms" && key != "cdf_knots") throw ConfigError("Psi JSON: unknown field '" + key + "'");
  }
  std::vector<PsiDistribution::Atom> atoms;
  std::vector<PsiDistribution::Knot> knots;
  try {
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at("t").get<double>(), a.at("mass").get<double>()});
    }
    if (j.contains("cdf_knots")) {
      for (const auto& k : j.at("cdf_knots")) {
        if (!k.is_array() || k.size() != 2) throw ConfigError("Psi JSON: each cdf knot is [t, F]");
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("Psi JSON: ") + e.what());
  }
  try {
    return PsiDistribution(std::move(atoms), std::move(knots), provenance);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("Psi JSON: ") + e.what());
  }
}

PsiDistribution load_psi(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open Psi file: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in Psi file " + path.string() + ": " + e.what());
  }
  try {
    return psi_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace adlab
