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

#include "cgqemcmc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cgqemcmc/mcmc.hpp"

namespace cgq {

namespace fs = std::filesystem;

namespace {

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string error_status(const std::exception& e) {
  const bool cap = dynamic_cast<const ResourceLimitError*>(&e) != nullptr;
  return sanitize(std::string(cap ? "resource_limit: " : "error: ") + e.what());
}

std::string format_temperature(double t) {
  std::ostringstream out;
  out << std::setprecision(6) << t;
  return out.str();
}

ProposalStrategy make_strategy(const StrategySpec& spec, std::size_t q,
                               const EmulatorSettings& emulator) {
  ProposalStrategy strategy;
  strategy.kind = spec.kind;
  strategy.group_size = q;
  strategy.emulator = emulator;
  return strategy;
}

std::size_t group_count(ProposalKind kind, std::size_t n, std::size_t q) {
  if (kind == ProposalKind::cg_multiple_groups) return (n + q - 1) / q;
  return is_coarse_grained(kind) ? 1 : 0;
}

std::string label_for(const StrategySpec& spec, std::size_t q) {
  std::string out = to_string(spec.kind);
  if (is_coarse_grained(spec.kind)) out += "_q" + std::to_string(q);
  return out;
}

void check_instance_sizes(const std::vector<IsingInstance>& instances, std::size_t cap,
                          const char* what) {
  for (const auto& inst : instances) {
    if (inst.size() > cap) {
      throw ResourceLimitError(std::string(what) + " is capped at " + std::to_string(cap) +
                               " spins; instance " + inst.instance_id() + " has " +
                               std::to_string(inst.size()));
    }
  }
}

// Mean and standard error of the mean.
std::pair<double, double> mean_se(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double mean = compensated_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double count = static_cast<double>(values.size());
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const CsvHeader& header, std::string_view columns) : out_(out) {
    saved_ = out_.precision(std::numeric_limits<double>::max_digits10);
    out_ << "# cgqemcmc " << kVersion << '\n'
         << "# config_hash " << hex64(header.config_hash) << '\n'
         << "# seed " << header.seed << '\n'
         << columns << '\n';
  }
  ~CsvWriter() { out_.precision(saved_); }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ","), write(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  template <typename T>
  void write(const T& value) {
    out_ << value;
  }
  void write(const std::optional<double>& value) {
    if (value) out_ << *value;
  }
  void write(const std::optional<std::size_t>& value) {
    if (value) out_ << *value;
  }
  void write(bool value) { out_ << (value ? 1 : 0); }

  std::ostream& out_;
  std::streamsize saved_;
};

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::vector<IsingInstance> config_instances(const ExperimentConfig& config) {
  std::vector<IsingInstance> out;
  if (!config.instance_files.empty()) {
    for (const auto& file : config.instance_files) out.push_back(load_instance(file));
    return out;
  }
  for (auto n : config.sizes) {
    for (std::size_t i = 0; i < config.count; ++i) {
      const auto seed =
          derive_seed(config.seed, "instance/" + std::to_string(n) + "/" + std::to_string(i));
      out.push_back(generate_instance(n, config.model_class, seed));
    }
  }
  return out;
}

std::vector<fs::path> cmd_generate(std::size_t n, ModelClass model_class, std::size_t count,
                                   std::uint64_t seed, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> paths;
  for (std::size_t i = 0; i < count; ++i) {
    const auto child = derive_seed(seed, "instance/" + std::to_string(n) + "/" + std::to_string(i));
    const auto inst = generate_instance(n, model_class, child);
    auto path = dir / (inst.instance_id() + ".txt");
    save_instance(path, inst);
    paths.push_back(std::move(path));
  }
  return paths;
}

// --- spectral sweeps -------------------------------------------------------

namespace {

struct SpectralCell {
  std::size_t instance = 0;
  std::size_t strategy = 0;
  std::size_t q = 0;
};

std::vector<SpectralRow> run_spectral_cell(const ExperimentConfig& config,
                                           const IsingInstance& inst, const StrategySpec& spec,
                                           std::size_t q, const std::vector<double>& temps) {
  const std::size_t n = inst.size();
  const auto strategy = make_strategy(spec, q, config.emulator);
  const std::string label = label_for(spec, q);
  const auto seed = derive_seed(config.seed, "spectral/" + inst.instance_id() + "/" + label);
  const bool bootstrap = config.bootstrap_replicates >= 2;

  SpectralRow base;
  base.instance_id = inst.instance_id();
  base.n = n;
  base.strategy = to_string(spec.kind);
  base.q = q;
  base.n_g = group_count(spec.kind, n, q);

  std::vector<SpectralRow> rows;
  try {
    strategy.validate(n);
    const auto energies = enumerate_energies(inst, config.enumeration_cap);
    ProposalEstimate estimate;
    bool exact_q = false;
    switch (spec.kind) {
      case ProposalKind::uniform:
      case ProposalKind::local_flip:
        estimate.Q = classical_proposal_matrix(n, spec.kind);
        exact_q = true;
        break;
      case ProposalKind::cg_multiple_groups:
        estimate = estimate_Q_bruteforce(inst, strategy, config.bruteforce_samples, seed, bootstrap,
                                         config.spectral);
        break;
      default: {
        RowwiseOptions options;
        options.samples_per_row = config.samples_per_row;
        options.sampling = config.sampling;
        options.seed = seed;
        options.keep_draws = bootstrap;
        estimate = estimate_Q_rowwise(inst, strategy, options, config.spectral);
      }
    }
    for (double t : temps) {
      SpectralRow row = base;
      row.temperature = t;
      const auto tm = assemble_transition(estimate.Q, energies, t, estimate.samples);
      row.delta = tm.delta;
      row.asymmetry = tm.asymmetry;
      row.n_samples = estimate.samples;
      if (exact_q) {
        row.delta_err = 0.0;
      } else if (bootstrap) {
        const auto boot = bootstrap_gap(estimate, energies, t, config.bootstrap_replicates,
                                        derive_seed(seed, "bootstrap/" + format_temperature(t)));
        row.delta_err = boot.standard_error;
      }
      if (tm.reducible) row.status = "reducible";
      rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    rows.clear();
    for (double t : temps) {
      SpectralRow row = base;
      row.temperature = t;
      row.delta = std::numeric_limits<double>::quiet_NaN();
      row.status = error_status(e);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

bool row_ok(const SpectralRow& row) { return row.status == "ok" || row.status == "reducible"; }

bool is_classical(ProposalKind kind) { return !is_quantum(kind); }

}  // namespace

void summarize_sweep(SweepResult& result, const std::vector<StrategySpec>& strategies) {
  using Key = std::tuple<std::string, std::size_t, std::size_t, double>;  // strategy, q, n, T
  std::map<Key, std::vector<double>> groups;
  std::set<std::size_t> sizes;
  std::set<double> temps;
  for (const auto& row : result.rows) {
    sizes.insert(row.n);
    temps.insert(row.temperature);
    if (!row_ok(row)) continue;
    groups[{row.strategy, row.q, row.n, row.temperature}].push_back(row.delta);
  }

  result.summary.clear();
  result.fits.clear();
  std::set<std::tuple<std::string, std::string, std::size_t, double>> emitted;
  const auto summary_of = [&](const std::string& strategy, std::size_t q, std::size_t n,
                              double t) -> std::optional<SummaryRow> {
    const auto it = groups.find({strategy, q, n, t});
    if (it == groups.end()) return std::nullopt;
    const auto stats = ensemble_stats(it->second);
    SummaryRow row;
    row.strategy = strategy;
    row.q_label = q ? std::to_string(q) : std::string();
    row.n = n;
    row.temperature = t;
    row.mean = stats.mean;
    row.standard_error = stats.standard_error;
    row.log_mean = stats.log_mean;
    row.log_standard_error = stats.log_standard_error;
    row.count = stats.count;
    return row;
  };
  const auto emit = [&](const SummaryRow& row) {
    if (emitted.insert({row.strategy, row.q_label, row.n, row.temperature}).second) {
      result.summary.push_back(row);
    }
  };

  // Points used for the fit of each (strategy spec, T).
  std::vector<std::map<double, std::vector<ScalingPoint>>> fit_points(strategies.size());
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const auto& spec = strategies[s];
    const std::string name = to_string(spec.kind);
    for (double t : temps) {
      for (auto n : sizes) {
        std::map<std::size_t, GapEstimate> by_q;
        bool complete = true;
        for (auto q : spec.group_sizes(n)) {
          const auto row = summary_of(name, q, n, t);
          if (!row) {
            complete = false;
            continue;
          }
          emit(*row);
          by_q[q] = {row->mean, row->standard_error};
          if (!spec.sqrt_group) {
            fit_points[s][t].push_back({double(n), row->mean, row->standard_error});
          }
        }
        if (!spec.sqrt_group || !complete) continue;
        const auto gap = interpolate_sqrt_n_gap(by_q, n);
        SummaryRow row;
        row.strategy = name;
        row.q_label = "sqrt";
        row.n = n;
        row.temperature = t;
        row.mean = gap.mean;
        row.standard_error = gap.error;
        row.log_mean = std::log(gap.mean);
        row.log_standard_error = gap.mean > 0.0 ? gap.error / gap.mean : 0.0;
        row.count = std::numeric_limits<std::size_t>::max();
        for (const auto& [q, _] : by_q) {
          row.count = std::min(row.count, groups.at({name, q, n, t}).size());
        }
        emit(row);
        fit_points[s][t].push_back({double(n), gap.mean, gap.error});
      }
    }
  }

  std::map<double, double> best_classical;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const auto& spec = strategies[s];
    for (const auto& [t, points] : fit_points[s]) {
      std::set<double> distinct;
      bool positive = true;
      for (const auto& p : points) {
        distinct.insert(p.n);
        positive = positive && p.delta > 0.0;
      }
      if (distinct.size() < 3 || !positive) continue;
      FitRow fit;
      fit.strategy = to_string(spec.kind);
      fit.q_label = spec.sqrt_group ? "sqrt"
                    : is_coarse_grained(spec.kind) ? std::to_string(spec.group_size)
                                                   : std::string();
      fit.temperature = t;
      fit.fit = fit_scaling(points);
      if (is_classical(spec.kind)) {
        auto [it, inserted] = best_classical.emplace(t, fit.fit.k);
        if (!inserted) it->second = std::min(it->second, fit.fit.k);
      }
      result.fits.push_back(fit);
    }
  }
  for (auto& fit : result.fits) {
    const auto it = best_classical.find(fit.temperature);
    if (it != best_classical.end() && fit.fit.k > 0.0) {
      fit.k_qef = quantum_enhancement_factor(fit.fit.k, it->second);
    }
  }
}

SweepResult run_spectral_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto instances = config_instances(config);
  check_instance_sizes(instances, config.spectral.spectral_cap, "spectral analysis");
  const auto temps = config.temperature_values();

  std::vector<SpectralCell> cells;
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      for (auto q : config.strategies[s].group_sizes(instances[i].size())) {
        cells.push_back({i, s, q});
      }
    }
  }
  std::vector<std::vector<SpectralRow>> results(cells.size());
  parallel_for(cells.size(), config.workers, [&](std::size_t k) {
    const auto& cell = cells[k];
    results[k] = run_spectral_cell(config, instances[cell.instance], config.strategies[cell.strategy],
                                   cell.q, temps);
  });

  // Deterministic order: strategy (config order), q, T, instance.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(cells[a].strategy, cells[a].q) < std::tie(cells[b].strategy, cells[b].q);
  });
  SweepResult result;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start;
    while (end < order.size() && cells[order[end]].strategy == cells[order[start]].strategy &&
           cells[order[end]].q == cells[order[start]].q) {
      ++end;
    }
    for (std::size_t ti = 0; ti < temps.size(); ++ti) {
      for (std::size_t k = start; k < end; ++k) {
        const auto& row = results[order[k]][ti];
        if (!row_ok(row)) ++result.failures;
        result.rows.push_back(row);
      }
    }
    start = end;
  }
  summarize_sweep(result, config.strategies);
  return result;
}

// --- chain ensembles ---------------------------------------------------------

namespace {

struct ChainCell {
  std::size_t instance = 0;
  std::size_t strategy = 0;
  std::size_t temperature = 0;
};

struct ChainOutcome {
  ChainRow row;
  std::vector<double> energy_curve;
  std::vector<double> magnetisation_curve;
};

std::vector<std::size_t> recorded_steps(std::size_t steps, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t k = stride; k <= steps; k += stride) out.push_back(k);
  if (out.empty() || out.back() != steps) out.push_back(steps);
  return out;
}

}  // namespace

ChainEnsembleResult run_chain_ensemble(const ExperimentConfig& config) {
  config.validate();
  const auto instances = config_instances(config);
  const auto temps = config.temperature_values();
  ChainEnsembleResult result;

  // Exact oracle per instance where enumeration is possible.
  std::vector<std::optional<double>> ground(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.size() > config.enumeration_cap) continue;
    for (double t : temps) {
      ExactOptions options;
      options.enumeration_cap = config.enumeration_cap;
      options.max_levels = std::max<std::size_t>(1, config.levels);
      const auto exact = exact_distribution(inst, t, options);
      ground[i] = exact.ground_state().energy;
      result.exact.push_back({inst.instance_id(), t, exact.ground_state().energy,
                              exact.boltzmann_energy, exact.boltzmann_magnetisation,
                              exact.log_partition_function});
      if (t == temps.front()) {
        for (std::size_t r = 0; r < std::min(config.levels, exact.sorted_levels.size()); ++r) {
          const auto& level = exact.sorted_levels[r];
          result.levels.push_back({inst.instance_id(), r,
                                   SpinState::from_bits(level.state, inst.size()).to_bitstring(),
                                   level.energy});
        }
      }
    }
  }

  std::vector<ChainCell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      for (std::size_t t = 0; t < temps.size(); ++t) cells.push_back({i, s, t});
    }
  }
  const std::size_t units = cells.size() * config.chains;
  std::vector<ChainOutcome> outcomes(units);
  if (config.write_traces) fs::create_directories(fs::path(config.output_dir) / "traces");

  parallel_for(units, config.workers, [&](std::size_t u) {
    const auto& cell = cells[u / config.chains];
    const std::size_t c = u % config.chains;
    const auto& inst = instances[cell.instance];
    const auto& spec = config.strategies[cell.strategy];
    const double t = temps[cell.temperature];
    const std::size_t q = spec.rounded_group_size(inst.size());
    const std::string label = label_for(spec, q);
    const std::size_t steps = config.steps_for(spec.kind);

    ChainOutcome& outcome = outcomes[u];
    ChainRow& row = outcome.row;
    row.instance_id = inst.instance_id();
    row.strategy = to_string(spec.kind);
    row.q = q;
    row.n_g = group_count(spec.kind, inst.size(), q);
    row.temperature = t;
    row.chain = c;
    row.steps = steps;
    row.ground_known = ground[cell.instance].has_value();
    row.seed = derive_seed(config.seed, "chain/" + inst.instance_id() + "/" + label + "/T" +
                                            format_temperature(t) + "/" + std::to_string(c));
    try {
      ChainOptions options;
      if (!config.write_traces) {
        options.state_cap = 0;
        options.snapshot_stride = steps;
      }
      const auto trace =
          run_chain(inst, make_strategy(spec, q, config.emulator), t, steps, row.seed, options);
      const auto summary = summarize(trace, ground[cell.instance]);
      row.final_energy = trace[steps - 1].energy;
      row.min_energy = trace[0].energy;
      for (const auto& r : trace.steps()) row.min_energy = std::min(row.min_energy, r.energy);
      row.mean_energy = summary.cumulative_energy.back();
      row.mean_magnetisation = summary.cumulative_magnetisation.back();
      row.acceptance_rate = summary.acceptance_rate;
      if (summary.found_ground_state_at) row.found_ground_at = *summary.found_ground_state_at + 1;
      for (auto k : recorded_steps(steps, config.record_stride)) {
        outcome.energy_curve.push_back(summary.cumulative_energy[k - 1]);
        outcome.magnetisation_curve.push_back(summary.cumulative_magnetisation[k - 1]);
      }
      if (config.write_traces) {
        const auto path = fs::path(config.output_dir) / "traces" /
                          (inst.instance_id() + "__" + label + "__T" + format_temperature(t) +
                           "__c" + std::to_string(c) + ".csv");
        write_file(path, [&](std::ostream& out) { write_trace_csv(out, trace); });
      }
    } catch (const std::exception& e) {
      row.status = error_status(e);
      row.final_energy = row.min_energy = row.mean_energy = row.mean_magnetisation =
          std::numeric_limits<double>::quiet_NaN();
    }
  });

  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& cell = cells[k];
    const auto& inst = instances[cell.instance];
    const auto& spec = config.strategies[cell.strategy];
    const std::size_t steps = config.steps_for(spec.kind);
    const auto recorded = recorded_steps(steps, config.record_stride);
    std::vector<const ChainOutcome*> good;
    for (std::size_t c = 0; c < config.chains; ++c) {
      const auto& outcome = outcomes[k * config.chains + c];
      result.chains.push_back(outcome.row);
      if (outcome.row.status == "ok") {
        good.push_back(&outcome);
      } else {
        ++result.failures;
      }
    }
    if (good.empty()) continue;
    for (std::size_t p = 0; p < recorded.size(); ++p) {
      std::vector<double> e, m;
      for (const auto* outcome : good) {
        e.push_back(outcome->energy_curve[p]);
        m.push_back(outcome->magnetisation_curve[p]);
      }
      EnsemblePoint point;
      point.instance_id = inst.instance_id();
      point.strategy = to_string(spec.kind);
      point.q = good.front()->row.q;
      point.temperature = temps[cell.temperature];
      point.step = recorded[p];
      point.chains = good.size();
      std::tie(point.cumulative_energy, point.cumulative_energy_se) = mean_se(e);
      std::tie(point.cumulative_magnetisation, point.cumulative_magnetisation_se) = mean_se(m);
      result.ensemble.push_back(point);
    }
  }
  return result;
}

// --- proposal statistics -------------------------------------------------------

ProposalStatsResult run_proposal_stats(const ExperimentConfig& config) {
  config.validate();
  const auto instances = config_instances(config);
  const auto temps = config.temperature_values();
  struct Cell {
    std::size_t instance, strategy, temperature;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      for (std::size_t t = 0; t < temps.size(); ++t) cells.push_back({i, s, t});
    }
  }
  struct Outcome {
    std::vector<HammingRow> hamming;
    std::vector<EnergyCdfRow> energy;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(cells.size());
  parallel_for(cells.size(), config.workers, [&](std::size_t k) {
    const auto& cell = cells[k];
    const auto& inst = instances[cell.instance];
    const auto& spec = config.strategies[cell.strategy];
    const double t = temps[cell.temperature];
    const std::size_t q = spec.rounded_group_size(inst.size());
    const std::string label = label_for(spec, q);
    const std::string name = to_string(spec.kind);
    try {
      const auto seed = derive_seed(config.seed, "proposal/" + inst.instance_id() + "/" + label +
                                                     "/T" + format_temperature(t));
      ChainOptions options;
      options.state_cap = 0;
      options.snapshot_stride = config.steps_for(spec.kind);
      const auto trace = run_chain(inst, make_strategy(spec, q, config.emulator), t,
                                   config.steps_for(spec.kind), seed, options);
      const auto stats = proposal_statistics(trace);
      for (std::size_t d = 0; d < stats.hamming_counts.size(); ++d) {
        outcomes[k].hamming.push_back(
            {inst.instance_id(), name, q, t, d, stats.hamming_counts[d], stats.hamming_cdf[d]});
      }
      const std::size_t total = stats.proposals();
      const std::size_t points = std::min<std::size_t>(1000, total);
      for (std::size_t r = 1; r <= points; ++r) {
        const std::size_t idx = (r * total + points - 1) / points - 1;
        outcomes[k].energy.push_back({inst.instance_id(), name, q, t,
                                      stats.sorted_abs_energy_delta[idx],
                                      static_cast<double>(idx + 1) / static_cast<double>(total)});
      }
    } catch (const std::exception&) {
      outcomes[k].failed = true;
    }
  });
  ProposalStatsResult result;
  for (auto& outcome : outcomes) {
    if (outcome.failed) ++result.failures;
    result.hamming.insert(result.hamming.end(), outcome.hamming.begin(), outcome.hamming.end());
    result.energy.insert(result.energy.end(), outcome.energy.begin(), outcome.energy.end());
  }
  return result;
}

// --- CSV ---------------------------------------------------------------------

CsvHeader csv_header_for(const ExperimentConfig& config) {
  return {config_hash(config), config.seed};
}

void write_spectral_csv(std::ostream& out, const CsvHeader& header,
                        const std::vector<SpectralRow>& rows) {
  CsvWriter csv(out, header,
                "instance_id,n,strategy,q,n_g,T,delta,delta_err,asymmetry,n_samples,status");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.n, r.strategy, r.q, r.n_g, r.temperature, r.delta, r.delta_err,
            r.asymmetry, r.n_samples, r.status);
  }
}

void write_summary_csv(std::ostream& out, const CsvHeader& header,
                       const std::vector<SummaryRow>& rows) {
  CsvWriter csv(out, header,
                "strategy,q,n,T,delta_mean,delta_err,log_delta_mean,log_delta_err,count");
  for (const auto& r : rows) {
    csv.row(r.strategy, r.q_label, r.n, r.temperature, r.mean, r.standard_error, r.log_mean,
            r.log_standard_error, r.count);
  }
}

void write_fits_csv(std::ostream& out, const CsvHeader& header, const std::vector<FitRow>& rows) {
  CsvWriter csv(out, header, "strategy,q,T,a,k,k_err,k_QEF,points,chi2");
  for (const auto& r : rows) {
    csv.row(r.strategy, r.q_label, r.temperature, r.fit.a, r.fit.k, r.fit.k_err, r.k_qef,
            r.fit.points, r.fit.chi2);
  }
}

void write_chains_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<ChainRow>& rows) {
  CsvWriter csv(out, header,
                "instance_id,strategy,q,n_g,T,chain,seed,steps,final_energy,min_energy,"
                "mean_energy,mean_magnetisation,acceptance_rate,found_ground_at,status");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.strategy, r.q, r.n_g, r.temperature, r.chain, r.seed, r.steps,
            r.final_energy, r.min_energy, r.mean_energy, r.mean_magnetisation, r.acceptance_rate,
            r.found_ground_at, r.status);
  }
}

void write_ensemble_csv(std::ostream& out, const CsvHeader& header,
                        const std::vector<EnsemblePoint>& rows) {
  CsvWriter csv(out, header,
                "instance_id,strategy,q,T,step,chains,cumulative_energy,cumulative_energy_err,"
                "cumulative_magnetisation,cumulative_magnetisation_err");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.strategy, r.q, r.temperature, r.step, r.chains, r.cumulative_energy,
            r.cumulative_energy_se, r.cumulative_magnetisation, r.cumulative_magnetisation_se);
  }
}

void write_minima_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<ChainRow>& rows) {
  CsvWriter csv(out, header, "instance_id,strategy,q,T,chains,chains_found_ground");
  using Key = std::tuple<std::string, std::string, std::size_t, double>;
  std::vector<Key> keys;
  std::map<Key, std::pair<std::size_t, std::size_t>> counts;
  std::map<Key, bool> oracle;
  for (const auto& r : rows) {
    const Key key{r.instance_id, r.strategy, r.q, r.temperature};
    if (!counts.count(key)) keys.push_back(key);
    auto& [chains, found] = counts[key];
    ++chains;
    if (r.found_ground_at) ++found;
    oracle[key] = oracle[key] || r.ground_known;
  }
  for (const auto& key : keys) {
    const auto& [chains, found] = counts.at(key);
    const std::optional<std::size_t> shown =
        oracle.at(key) ? std::optional<std::size_t>(found) : std::nullopt;
    csv.row(std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), chains, shown);
  }
}

void write_exact_csv(std::ostream& out, const CsvHeader& header,
                     const std::vector<ExactRow>& rows) {
  CsvWriter csv(out, header,
                "instance_id,T,ground_energy,boltzmann_energy,boltzmann_magnetisation,log_Z");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.temperature, r.ground_energy, r.boltzmann_energy,
            r.boltzmann_magnetisation, r.log_partition_function);
  }
}

void write_levels_csv(std::ostream& out, const CsvHeader& header,
                      const std::vector<LevelRow>& rows) {
  CsvWriter csv(out, header, "instance_id,rank,state,energy");
  for (const auto& r : rows) csv.row(r.instance_id, r.rank, r.state, r.energy);
}

void write_hamming_csv(std::ostream& out, const CsvHeader& header,
                       const std::vector<HammingRow>& rows) {
  CsvWriter csv(out, header, "instance_id,strategy,q,T,distance,count,cdf");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.strategy, r.q, r.temperature, r.distance, r.count, r.cdf);
  }
}

void write_energy_cdf_csv(std::ostream& out, const CsvHeader& header,
                          const std::vector<EnergyCdfRow>& rows) {
  CsvWriter csv(out, header, "instance_id,strategy,q,T,abs_dE,cdf");
  for (const auto& r : rows) {
    csv.row(r.instance_id, r.strategy, r.q, r.temperature, r.abs_delta_energy, r.cdf);
  }
}

std::vector<SpectralRow> read_spectral_csv(std::istream& in) {
  std::vector<SpectralRow> rows;
  std::string line;
  std::vector<std::string> columns;
  const auto split = [](const std::string& text) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(text);
    while (std::getline(stream, field, ',')) out.push_back(field);
    if (!text.empty() && text.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (columns.empty()) {
      columns = split(line);
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != columns.size()) {
      throw ConfigError("spectral CSV row has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(columns.size()));
    }
    std::map<std::string, std::string> f;
    for (std::size_t i = 0; i < columns.size(); ++i) f[columns[i]] = fields[i];
    const auto need = [&](const char* name) -> const std::string& {
      const auto it = f.find(name);
      if (it == f.end()) throw ConfigError(std::string("spectral CSV lacks column ") + name);
      return it->second;
    };
    try {
      SpectralRow row;
      row.instance_id = need("instance_id");
      row.n = std::stoul(need("n"));
      row.strategy = need("strategy");
      row.q = std::stoul(need("q"));
      row.n_g = std::stoul(need("n_g"));
      row.temperature = std::stod(need("T"));
      row.delta = std::stod(need("delta"));
      if (!need("delta_err").empty()) row.delta_err = std::stod(need("delta_err"));
      row.asymmetry = std::stod(need("asymmetry"));
      row.n_samples = std::stoul(need("n_samples"));
      row.status = need("status");
      rows.push_back(std::move(row));
    } catch (const std::logic_error& e) {
      throw ConfigError(std::string("malformed spectral CSV value: ") + e.what());
    }
  }
  if (columns.empty()) throw ConfigError("spectral CSV has no header row");
  return rows;
}

std::size_t run_experiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  save_config(dir / "config.json", config);
  const auto header = csv_header_for(config);
  switch (config.kind) {
    case ExperimentKind::spectral_sweep:
    case ExperimentKind::temperature_sweep: {
      const auto result = run_spectral_sweep(config);
      write_file(dir / "spectral.csv",
                 [&](std::ostream& out) { write_spectral_csv(out, header, result.rows); });
      write_file(dir / "summary.csv",
                 [&](std::ostream& out) { write_summary_csv(out, header, result.summary); });
      write_file(dir / "fits.csv",
                 [&](std::ostream& out) { write_fits_csv(out, header, result.fits); });
      return result.failures;
    }
    case ExperimentKind::chain_ensemble: {
      const auto result = run_chain_ensemble(config);
      write_file(dir / "chains.csv",
                 [&](std::ostream& out) { write_chains_csv(out, header, result.chains); });
      write_file(dir / "ensemble.csv",
                 [&](std::ostream& out) { write_ensemble_csv(out, header, result.ensemble); });
      write_file(dir / "minima.csv",
                 [&](std::ostream& out) { write_minima_csv(out, header, result.chains); });
      write_file(dir / "exact.csv",
                 [&](std::ostream& out) { write_exact_csv(out, header, result.exact); });
      write_file(dir / "levels.csv",
                 [&](std::ostream& out) { write_levels_csv(out, header, result.levels); });
      return result.failures;
    }
    case ExperimentKind::proposal_stats: {
      const auto result = run_proposal_stats(config);
      write_file(dir / "proposal_hamming.csv",
                 [&](std::ostream& out) { write_hamming_csv(out, header, result.hamming); });
      write_file(dir / "proposal_energy.csv",
                 [&](std::ostream& out) { write_energy_cdf_csv(out, header, result.energy); });
      return result.failures;
    }
  }
  return 0;
}

}  // namespace cgq
