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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgqemcmc/emulator.hpp"
#include "cgqemcmc/ising.hpp"
#include "cgqemcmc/proposals.hpp"
#include "cgqemcmc/spectral.hpp"

namespace cgq {

enum class ExperimentKind { chain_ensemble, spectral_sweep, temperature_sweep, proposal_stats };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

// A strategy entry such as "local", "cg_improved:3" or
// "cg_multiple_groups:sqrt". `sqrt` selects q = sqrt(n): spectral sweeps
// evaluate both bracketing integers and interpolate, chain runs round.
struct StrategySpec {
  ProposalKind kind = ProposalKind::uniform;
  std::size_t group_size = 0;
  bool sqrt_group = false;

  static StrategySpec parse(std::string_view text);
  std::string to_string() const;
  // Concrete group sizes for an n-spin instance (one entry for fixed q or
  // no group, the bracketing pair for sqrt).
  std::vector<std::size_t> group_sizes(std::size_t n) const;
  std::size_t rounded_group_size(std::size_t n) const;
};

struct TemperatureGrid {
  double min = 0.1;
  double max = 10.0;
  std::size_t points = 9;
  // Log-spaced, ascending.
  std::vector<double> values() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::spectral_sweep;

  // Instance source: explicit files, else `count` generated instances per size.
  std::vector<std::string> instance_files;
  ModelClass model_class = ModelClass::fully_connected;
  std::vector<std::size_t> sizes;
  std::size_t count = 1;

  std::vector<StrategySpec> strategies;
  std::vector<double> temperatures;
  std::optional<TemperatureGrid> temperature_grid;

  std::size_t chains = 10;
  std::size_t steps_classical = 100'000;
  std::size_t steps_quantum = 10'000;
  // Ensemble curves are written every `record_stride` steps (and at the last).
  std::size_t record_stride = 100;
  bool write_traces = false;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t workers = 1;

  EmulatorSettings emulator;
  SpectralLimits spectral;
  std::size_t samples_per_row = 30;
  RowSampling sampling = RowSampling::paired;
  // Proposal steps for the brute-force estimator; 0 selects (2^n)^2.
  std::size_t bruteforce_samples = 0;
  // Per-cell bootstrap of delta_err; 0 leaves the column empty.
  std::size_t bootstrap_replicates = 0;
  std::size_t enumeration_cap = 25;
  std::size_t levels = 10;

  void validate() const;
  // Temperatures from the explicit list, else from the grid, ascending.
  std::vector<double> temperature_values() const;
  std::size_t steps_for(ProposalKind kind) const;
};

nlohmann::json to_json(const ExperimentConfig& config);
// Unknown keys and malformed values raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& json);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& config);

// FNV-1a of the canonical JSON, ignoring output_dir and workers (which do
// not affect results).
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hex64(std::uint64_t value);

// Named presets: fig2, fig3, fig1-25spin, fig5 at scale "desk" or "paper".
ExperimentConfig preset_config(std::string_view name, std::string_view scale);
std::vector<std::string> preset_names();

// Instances named by the config, generated with
// derive_seed(seed, "instance/<n>/<i>") or loaded from files.
std::vector<IsingInstance> config_instances(const ExperimentConfig& config);

// Writes `count` instance files into `dir` with the same seed fan-out as
// config_instances; returns the paths.
std::vector<std::filesystem::path> cmd_generate(std::size_t n, ModelClass model_class,
                                                std::size_t count, std::uint64_t seed,
                                                const std::filesystem::path& dir);

// One spectral result cell.
struct SpectralRow {
  std::string instance_id;
  std::size_t n = 0;
  std::string strategy;
  std::size_t q = 0;
  std::size_t n_g = 0;
  double temperature = 0.0;
  double delta = 0.0;
  std::optional<double> delta_err;
  double asymmetry = 0.0;
  std::size_t n_samples = 0;
  std::string status = "ok";
};

// Ensemble mean of delta per (strategy, q, n, T). q_label is the integer
// group size, "sqrt" for interpolated rows, or empty.
struct SummaryRow {
  std::string strategy;
  std::string q_label;
  std::size_t n = 0;
  double temperature = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  double log_mean = 0.0;
  double log_standard_error = 0.0;
  std::size_t count = 0;
};

struct FitRow {
  std::string strategy;
  std::string q_label;
  double temperature = 0.0;
  ScalingFit fit;
  std::optional<double> k_qef;
};

struct SweepResult {
  std::vector<SpectralRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<FitRow> fits;
  std::size_t failures = 0;
};

// Ensemble statistics, sqrt(n) interpolation for sqrt strategies, and a
// scaling fit per (strategy, q, T) when at least three sizes are present.
// k_QEF is the best (smallest) classical k at that T over each k.
void summarize_sweep(SweepResult& result, const std::vector<StrategySpec>& strategies);

SweepResult run_spectral_sweep(const ExperimentConfig& config);

struct ChainRow {
  std::string instance_id;
  std::string strategy;
  std::size_t q = 0;
  std::size_t n_g = 0;
  double temperature = 0.0;
  std::size_t chain = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double final_energy = 0.0;
  double min_energy = 0.0;
  double mean_energy = 0.0;
  double mean_magnetisation = 0.0;
  double acceptance_rate = 0.0;
  // Set when an exact ground-state energy was available.
  bool ground_known = false;
  std::optional<std::size_t> found_ground_at;
  std::string status = "ok";
};

struct EnsemblePoint {
  std::string instance_id;
  std::string strategy;
  std::size_t q = 0;
  double temperature = 0.0;
  std::size_t step = 0;
  std::size_t chains = 0;
  double cumulative_energy = 0.0;
  double cumulative_energy_se = 0.0;
  double cumulative_magnetisation = 0.0;
  double cumulative_magnetisation_se = 0.0;
};

struct ExactRow {
  std::string instance_id;
  double temperature = 0.0;
  double ground_energy = 0.0;
  double boltzmann_energy = 0.0;
  double boltzmann_magnetisation = 0.0;
  double log_partition_function = 0.0;
};

struct LevelRow {
  std::string instance_id;
  std::size_t rank = 0;
  std::string state;
  double energy = 0.0;
};

struct ChainEnsembleResult {
  std::vector<ChainRow> chains;
  std::vector<EnsemblePoint> ensemble;
  std::vector<ExactRow> exact;
  std::vector<LevelRow> levels;
  std::size_t failures = 0;
};

ChainEnsembleResult run_chain_ensemble(const ExperimentConfig& config);

struct HammingRow {
  std::string instance_id;
  std::string strategy;
  std::size_t q = 0;
  double temperature = 0.0;
  std::size_t distance = 0;
  std::size_t count = 0;
  double cdf = 0.0;
};

struct EnergyCdfRow {
  std::string instance_id;
  std::string strategy;
  std::size_t q = 0;
  double temperature = 0.0;
  double abs_delta_energy = 0.0;
  double cdf = 0.0;
};

struct ProposalStatsResult {
  std::vector<HammingRow> hamming;
  std::vector<EnergyCdfRow> energy;
  std::size_t failures = 0;
};

// Proposals along one chain per (instance, strategy, T) of steps_for(kind)
// steps. The |dE| CDF is written at up to 1000 evenly spaced order statistics.
ProposalStatsResult run_proposal_stats(const ExperimentConfig& config);

// CSV writers. Every file opens with "# " lines carrying the software
// version, config hash and master seed, then a header row.
struct CsvHeader {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

CsvHeader csv_header_for(const ExperimentConfig& config);

void write_spectral_csv(std::ostream& out, const CsvHeader& header,
                        const std::vector<SpectralRow>& rows);
void write_summary_csv(std::ostream& out, const CsvHeader& header,
                       const std::vector<SummaryRow>& rows);
void write_fits_csv(std::ostream& out, const CsvHeader& header, const std::vector<FitRow>& rows);
void write_chains_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<ChainRow>& rows);
void write_ensemble_csv(std::ostream& out, const CsvHeader& header,
                        const std::vector<EnsemblePoint>& rows);
void write_minima_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<ChainRow>& rows);
void write_exact_csv(std::ostream& out, const CsvHeader& header,
                     const std::vector<ExactRow>& rows);
void write_levels_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<LevelRow>& rows);
void write_hamming_csv(std::ostream& out, const CsvHeader& header,
                       const std::vector<HammingRow>& rows);
void write_energy_cdf_csv(std::ostream& out, const CsvHeader& header,
                          const std::vector<EnergyCdfRow>& rows);

// Parses spectral.csv content back into rows (comment lines skipped).
std::vector<SpectralRow> read_spectral_csv(std::istream& in);

// Runs the experiment named by config.kind and writes its CSV files and an
// archived config.json into config.output_dir. Returns the number of failed
// cells.
std::size_t run_experiment(const ExperimentConfig& config);

}  // namespace cgq
