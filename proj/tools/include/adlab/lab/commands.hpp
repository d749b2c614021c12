#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "adlab/json_io.hpp"
#include "adlab/lab/config.hpp"

namespace adlab::lab {

// Named JSON documents produced by a command, in emission order.
using Artifacts = std::vector<std::pair<std::string, Json>>;

Artifacts cmd_sieve(const ExperimentConfig& cfg);
Artifacts cmd_tail(const ExperimentConfig& cfg);
Artifacts cmd_model(const ExperimentConfig& cfg);
Artifacts cmd_asym(const ExperimentConfig& cfg);
Artifacts cmd_series(const ExperimentConfig& cfg);
Artifacts cmd_compare(const ExperimentConfig& cfg);

// Writes each artifact as <dir>/<name> with a trailing newline; returns the paths.
std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts);

// 0 ok, 2 config or invalid input, 3 numeric, 4 resource.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace adlab::lab
