#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "adlab/lab/commands.hpp"

namespace {

using adlab::lab::Artifacts;
using adlab::lab::ExperimentConfig;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// Applied after the config file, in this order; flags win.
constexpr Flag kFlags[] = {
    {"--fn", "fn", "omega | frac:N/D | table:PATH | C*SPEC"},
    {"--x", "x", "x or ascending comma list, e.g. 1e5,1e6"},
    {"--y", "y", "truncation point"},
    {"--deltas", "deltas", "a:b:step or comma list"},
    {"--psi", "psi", "closed | empirical | FILE"},
    {"--normalize", "normalize", "sigma | B"},
    {"--method", "method", "dp | mc"},
    {"--samples", "samples", "Monte Carlo samples"},
    {"--seed", "seed", "Monte Carlo seed"},
    {"--out", "out", "output directory"},
    {"--level", "level", "normal | s | full"},
    {"--k", "k", "series order, 1..24"},
    {"--P", "P", "Euler product truncation"},
    {"--c-grid", "c_grid", "x grid for the Mertens-type constant"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adlab: tails of additive functions"};
  app.require_subcommand(1);

  std::map<std::string, Artifacts (*)(const ExperimentConfig&)> commands{
      {"sieve", adlab::lab::cmd_sieve}, {"tail", adlab::lab::cmd_tail},     {"model", adlab::lab::cmd_model},
      {"asym", adlab::lab::cmd_asym},   {"series", adlab::lab::cmd_series}, {"compare", adlab::lab::cmd_compare},
  };
  std::map<std::string, std::string> values;
  std::string config_path;
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (schema_version 1)");
    for (const auto& f : kFlags) sub->add_option(f.name, values[f.key], f.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : adlab::lab::load_config(config_path);
    for (const auto& f : kFlags) {
      const auto* sub = app.get_subcommands().front();
      if (sub->count(f.name) > 0) adlab::lab::set_field(cfg, f.key, values[f.key]);
    }
    const auto name = app.get_subcommands().front()->get_name();
    const auto paths = adlab::lab::write_artifacts(cfg.out, commands.at(name)(cfg));
    for (const auto& p : paths) std::cout << p.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return adlab::lab::exit_code_for(e);
  }
}
