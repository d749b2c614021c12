#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "adlab/coefficients.hpp"
#include "adlab/empirical.hpp"
#include "adlab/model.hpp"
#include "adlab/prime_stats.hpp"
#include "adlab/psi.hpp"
#include "adlab/saddle.hpp"

namespace adlab {

using Json = nlohmann::ordered_json;

Json to_json(const PrimeStats& s);
Json to_json(const TailTable& t);
Json to_json(const TailEstimate& e);
Json to_json(const Prediction& p);
Json to_json(const CoefficientVector& c);
Json to_json(const SaddleSolution& s);

// {"atoms": [{"t", "mass"}], "cdf_knots": [[t, F], ...]}; F is the cumulative
// continuous mass, starting at 0.
Json psi_to_json(const PsiDistribution& psi);
PsiDistribution psi_from_json(const Json& j,
                              PsiDistribution::Provenance provenance = PsiDistribution::Provenance::kFile);
// ConfigError naming the path on I/O or format problems.
PsiDistribution load_psi(const std::filesystem::path& path);

}  // namespace adlab
