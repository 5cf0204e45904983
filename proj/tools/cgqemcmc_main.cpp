// Copyright 2026 The cgqemcmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver. Exit codes: 0 success, 1 unexpected failure,
// 2 configuration error, 3 resource cap exceeded, 4 some cells failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cgqemcmc/experiment.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitPartial = 4;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> emulator_mode;
  std::optional<std::size_t> trotter_slices;

  void attach(CLI::App* app) {
    app->add_option("--out", out, "Output directory");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--emulator-mode", emulator_mode, "Quantum emulation mode")
        ->check(CLI::IsMember({"exact", "trotter"}));
    app->add_option("--trotter-slices", trotter_slices, "Trotter slices (0 = ceil(10 t))");
  }

  void apply(cgq::ExperimentConfig& config) const {
    if (out) config.output_dir = *out;
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (emulator_mode) {
      config.emulator.mode =
          *emulator_mode == "exact" ? cgq::EvolutionMode::exact : cgq::EvolutionMode::trotter;
    }
    if (trotter_slices) {
      config.emulator.mode = cgq::EvolutionMode::trotter;
      config.emulator.trotter_slices = *trotter_slices;
    }
  }
};

int report(std::size_t failures, const fs::path& dir) {
  if (failures > 0) {
    std::cerr << failures << " cell(s) failed; see status columns in " << dir << '\n';
    return kExitPartial;
  }
  std::cerr << "wrote " << dir << '\n';
  return 0;
}

int run_config(const std::string& path, cgq::ExperimentKind kind, const Overrides& overrides) {
  auto config = cgq::load_config(path);
  const bool sweep_pair = (config.kind == cgq::ExperimentKind::spectral_sweep ||
                           config.kind == cgq::ExperimentKind::temperature_sweep) &&
                          (kind == cgq::ExperimentKind::spectral_sweep ||
                           kind == cgq::ExperimentKind::temperature_sweep);
  if (config.kind != kind && !sweep_pair) {
    throw cgq::ConfigError("config is a " + cgq::to_string(config.kind) + " experiment, not " +
                           cgq::to_string(kind));
  }
  config.kind = kind;
  overrides.apply(config);
  config.validate();
  return report(cgq::run_experiment(config), config.output_dir);
}

int run_fit(const std::string& csv_path, std::optional<std::string> config_path,
            const std::optional<std::string>& out) {
  const fs::path csv(csv_path);
  if (!config_path) config_path = (csv.parent_path() / "config.json").string();
  const auto config = cgq::load_config(*config_path);
  std::ifstream in(csv);
  if (!in) throw cgq::ConfigError("cannot open " + csv.string());
  cgq::SweepResult result;
  result.rows = cgq::read_spectral_csv(in);
  cgq::summarize_sweep(result, config.strategies);
  const fs::path dir = out ? fs::path(*out) : csv.parent_path();
  fs::create_directories(dir);
  const auto header = cgq::csv_header_for(config);
  {
    std::ofstream file(dir / "summary.csv", std::ios::binary);
    cgq::write_summary_csv(file, header, result.summary);
  }
  std::ofstream file(dir / "fits.csv", std::ios::binary);
  cgq::write_fits_csv(file, header, result.fits);
  if (!file) throw std::runtime_error("failed writing " + (dir / "fits.csv").string());
  for (const auto& fit : result.fits) {
    std::cout << fit.strategy << (fit.q_label.empty() ? "" : ":" + fit.q_label) << " T="
              << fit.temperature << " k=" << fit.fit.k << " +- " << fit.fit.k_err;
    if (fit.k_qef) std::cout << " k_QEF=" << *fit.k_qef;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-grained quantum-enhanced MCMC experiments"};
  app.set_version_flag("--version", std::string(cgq::kVersion));
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Write random instance files");
  std::size_t gen_n = 0, gen_count = 1;
  std::string gen_class = "fully_connected", gen_out = "instances";
  std::uint64_t gen_seed = 1;
  generate->add_option("-n,--n", gen_n, "Number of spins")->required();
  generate->add_option("--class", gen_class, "fully_connected or one_d_ring");
  generate->add_option("--count", gen_count, "Number of instances");
  generate->add_option("--seed", gen_seed, "Master seed");
  generate->add_option("--out", gen_out, "Output directory");

  struct ConfigCommand {
    const char* name;
    const char* help;
    cgq::ExperimentKind kind;
    CLI::App* app = nullptr;
    std::string config;
    Overrides overrides;
  };
  std::vector<ConfigCommand> commands = {
      {"spectral-sweep", "Spectral gaps over instances, strategies and sizes",
       cgq::ExperimentKind::spectral_sweep},
      {"temperature-sweep", "Spectral gaps over a temperature grid",
       cgq::ExperimentKind::temperature_sweep},
      {"chain-ensemble", "Markov chain ensembles with energy and magnetisation traces",
       cgq::ExperimentKind::chain_ensemble},
      {"proposal-stats", "Hamming distance and energy change of proposals",
       cgq::ExperimentKind::proposal_stats},
  };
  for (auto& command : commands) {
    command.app = app.add_subcommand(command.name, command.help);
    command.app->add_option("--config", command.config, "Experiment config (JSON)")->required();
    command.overrides.attach(command.app);
  }

  auto* fit = app.add_subcommand("fit", "Ensemble means, sqrt(n) interpolation and scaling fits");
  std::string fit_csv;
  std::optional<std::string> fit_config, fit_out;
  fit->add_option("--csv", fit_csv, "spectral.csv from a sweep")->required();
  fit->add_option("--config", fit_config, "Archived config (default: next to the CSV)");
  fit->add_option("--out", fit_out, "Output directory (default: next to the CSV)");

  auto* reproduce = app.add_subcommand("reproduce", "Run a named preset");
  std::string preset, scale = "desk";
  bool dry_run = false;
  Overrides reproduce_overrides;
  reproduce->add_option("preset", preset, "fig2, fig3, fig1-25spin or fig5")->required();
  reproduce->add_option("--scale", scale, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  reproduce->add_flag("--dry-run", dry_run, "Only write the preset config");
  reproduce_overrides.attach(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*generate) {
      const auto paths = cgq::cmd_generate(gen_n, cgq::parse_model_class(gen_class), gen_count,
                                           gen_seed, gen_out);
      for (const auto& p : paths) std::cout << p.string() << '\n';
      return 0;
    }
    for (const auto& command : commands) {
      if (*command.app) return run_config(command.config, command.kind, command.overrides);
    }
    if (*fit) return run_fit(fit_csv, fit_config, fit_out);
    if (*reproduce) {
      auto config = cgq::preset_config(preset, scale);
      reproduce_overrides.apply(config);
      config.validate();
      if (dry_run) {
        fs::create_directories(config.output_dir);
        cgq::save_config(fs::path(config.output_dir) / "config.json", config);
        std::cout << (fs::path(config.output_dir) / "config.json").string() << '\n';
        return 0;
      }
      return report(cgq::run_experiment(config), config.output_dir);
    }
  } catch (const cgq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cgq::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
