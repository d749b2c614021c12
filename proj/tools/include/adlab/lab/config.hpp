#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adlab/additive_function.hpp"
#include "adlab/empirical.hpp"
#include "adlab/json_io.hpp"
#include "adlab/model.hpp"
#include "adlab/saddle.hpp"

namespace adlab::lab {

inline constexpr int kSchemaVersion = 1;

enum class PsiSource { kClosed, kEmpirical, kFile };

struct ExperimentConfig {
  std::string fn = "omega";
  std::vector<std::uint64_t> x{1000000};
  std::optional<std::uint64_t> y;
  std::vector<double> deltas{1.0};
  PsiSource psi = PsiSource::kClosed;
  std::filesystem::path psi_path;
  Normalization normalize = Normalization::kSigma;
  TailMethod method = TailMethod::kDp;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
  AsymLevel level = AsymLevel::kNormal;
  int k = 12;
  std::uint64_t l_product_P = 1'000'000;
  std::vector<std::uint64_t> c_grid{100'000, 1'000'000, 10'000'000};
};

// omega | frac:N/D | table:PATH | C*SPEC, C > 0.
AdditiveFunction parse_function(const std::string& spec);

// "a:b:step" (inclusive, step > 0) or a comma-separated list; result ascending.
std::vector<double> parse_deltas(const std::string& spec);

// Nonnegative integer, decimal or scientific ("1e6").
std::uint64_t parse_count(const std::string& text, const std::string& what);

// Comma-separated counts, ascending and distinct.
std::vector<std::uint64_t> parse_count_list(const std::string& text, const std::string& what);

// Flag-style setters shared by the config file and the command line.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Requires schema_version == kSchemaVersion; unknown keys are ConfigError.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);
Json config_to_json(const ExperimentConfig& cfg);

}  // namespace adlab::lab
