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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cgqemcmc/experiment.hpp"

namespace cgq {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::chain_ensemble:
      return "chain-ensemble";
    case ExperimentKind::spectral_sweep:
      return "spectral-sweep";
    case ExperimentKind::temperature_sweep:
      return "temperature-sweep";
    case ExperimentKind::proposal_stats:
      return "proposal-stats";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "chain-ensemble") return ExperimentKind::chain_ensemble;
  if (text == "spectral-sweep") return ExperimentKind::spectral_sweep;
  if (text == "temperature-sweep") return ExperimentKind::temperature_sweep;
  if (text == "proposal-stats" || text == "proposal-statistics") {
    return ExperimentKind::proposal_stats;
  }
  throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

StrategySpec StrategySpec::parse(std::string_view text) {
  StrategySpec spec;
  const auto colon = text.find(':');
  try {
    spec.kind = parse_proposal_kind(text.substr(0, colon));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (colon == std::string_view::npos) {
    if (is_coarse_grained(spec.kind)) {
      throw ConfigError("coarse-grained strategy '" + std::string(text) +
                        "' needs a group size, e.g. ':3' or ':sqrt'");
    }
    return spec;
  }
  if (!is_coarse_grained(spec.kind)) {
    throw ConfigError("strategy '" + std::string(text) + "' takes no group size");
  }
  const auto arg = text.substr(colon + 1);
  if (arg == "sqrt") {
    spec.sqrt_group = true;
    return spec;
  }
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), spec.group_size);
  if (ec != std::errc() || ptr != arg.data() + arg.size() || spec.group_size == 0) {
    throw ConfigError("bad group size in strategy '" + std::string(text) + "'");
  }
  return spec;
}

std::string StrategySpec::to_string() const {
  std::string out = cgq::to_string(kind);
  if (sqrt_group) return out + ":sqrt";
  if (is_coarse_grained(kind)) out += ":" + std::to_string(group_size);
  return out;
}

std::vector<std::size_t> StrategySpec::group_sizes(std::size_t n) const {
  if (!is_coarse_grained(kind)) return {0};
  if (!sqrt_group) return {group_size};
  const double root = std::sqrt(static_cast<double>(n));
  const auto lo = static_cast<std::size_t>(std::floor(root));
  const auto hi = static_cast<std::size_t>(std::ceil(root));
  if (lo == hi) return {lo};
  return {lo, hi};
}

std::size_t StrategySpec::rounded_group_size(std::size_t n) const {
  if (!is_coarse_grained(kind)) return 0;
  if (!sqrt_group) return group_size;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(double(n)))));
}

std::vector<double> TemperatureGrid::values() const {
  if (points == 1) return {min};
  std::vector<double> out(points);
  const double lmin = std::log(min);
  const double lmax = std::log(max);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
  }
  out.front() = min;
  out.back() = max;
  return out;
}

void ExperimentConfig::validate() const {
  if (instance_files.empty()) {
    if (sizes.empty()) throw ConfigError("config names neither instance files nor sizes");
    if (count == 0) throw ConfigError("instance count must be positive");
    for (auto n : sizes) {
      if (n < 2) throw ConfigError("instance sizes must be at least 2");
    }
  }
  if (strategies.empty()) throw ConfigError("config lists no strategies");
  if (temperatures.empty() && !temperature_grid) throw ConfigError("config lists no temperatures");
  for (double t : temperatures) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("temperatures must be positive");
  }
  if (temperature_grid) {
    const auto& g = *temperature_grid;
    if (!(g.min > 0.0) || !(g.max >= g.min) || g.points == 0 || !std::isfinite(g.max)) {
      throw ConfigError("temperature grid needs 0 < min <= max and at least one point");
    }
  }
  if (kind == ExperimentKind::chain_ensemble || kind == ExperimentKind::proposal_stats) {
    if (steps_classical == 0 || steps_quantum == 0) {
      throw ConfigError("chain runs need a positive number of steps");
    }
  }
  if (kind == ExperimentKind::chain_ensemble && chains == 0) {
    throw ConfigError("chain ensembles need at least one chain");
  }
  if (record_stride == 0) throw ConfigError("record_stride must be positive");
  if (samples_per_row == 0) throw ConfigError("samples_per_row must be positive");
  if (bootstrap_replicates == 1) throw ConfigError("bootstrap needs at least two replicates");
  if (emulator.mode == EvolutionMode::exact && emulator.trotter_slices != 0) {
    throw ConfigError("trotter_slices is only meaningful in trotter mode");
  }
}

std::vector<double> ExperimentConfig::temperature_values() const {
  std::vector<double> out = temperatures.empty() ? temperature_grid->values() : temperatures;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t ExperimentConfig::steps_for(ProposalKind kind) const {
  return is_quantum(kind) ? steps_quantum : steps_classical;
}

namespace {

std::string mode_name(EvolutionMode mode) {
  return mode == EvolutionMode::exact ? "exact" : "trotter";
}

EvolutionMode parse_mode(const std::string& text) {
  if (text == "exact") return EvolutionMode::exact;
  if (text == "trotter") return EvolutionMode::trotter;
  throw ConfigError("emulator mode must be 'exact' or 'trotter', not '" + text + "'");
}

std::string sampling_name(RowSampling sampling) {
  return sampling == RowSampling::paired ? "paired" : "independent";
}

RowSampling parse_sampling(const std::string& text) {
  if (text == "paired") return RowSampling::paired;
  if (text == "independent") return RowSampling::independent;
  throw ConfigError("row sampling must be 'paired' or 'independent', not '" + text + "'");
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> keys,
                    const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : object.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read_if(const json& object, const char* key, T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["instances"] = {{"files", c.instance_files},
                    {"model_class", to_string(c.model_class)},
                    {"sizes", c.sizes},
                    {"count", c.count}};
  std::vector<std::string> strategies;
  for (const auto& s : c.strategies) strategies.push_back(s.to_string());
  j["strategies"] = strategies;
  j["temperatures"] = c.temperatures;
  if (c.temperature_grid) {
    j["temperature_grid"] = {{"min", c.temperature_grid->min},
                             {"max", c.temperature_grid->max},
                             {"points", c.temperature_grid->points}};
  }
  j["chains"] = c.chains;
  j["steps"] = {{"classical", c.steps_classical}, {"quantum", c.steps_quantum}};
  j["record_stride"] = c.record_stride;
  j["write_traces"] = c.write_traces;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  j["emulator"] = {{"mode", mode_name(c.emulator.mode)},
                   {"trotter_slices", c.emulator.trotter_slices},
                   {"dense_cap", c.emulator.dense_cap},
                   {"trotter_cap", c.emulator.trotter_cap}};
  j["spectral"] = {{"cap", c.spectral.spectral_cap},
                   {"samples_per_row", c.samples_per_row},
                   {"sampling", sampling_name(c.sampling)},
                   {"bruteforce_samples", c.bruteforce_samples},
                   {"bootstrap_replicates", c.bootstrap_replicates}};
  j["exact"] = {{"enumeration_cap", c.enumeration_cap}, {"levels", c.levels}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"kind", "instances", "strategies", "temperatures", "temperature_grid", "chains",
                  "steps", "record_stride", "write_traces", "seed", "output_dir", "workers",
                  "emulator", "spectral", "exact"},
                 "config");
  ExperimentConfig c;
  if (!j.contains("kind")) throw ConfigError("config has no 'kind'");
  std::string text;
  read_if(j, "kind", text);
  c.kind = parse_experiment_kind(text);

  if (j.contains("instances")) {
    const auto& inst = j.at("instances");
    reject_unknown(inst, {"files", "model_class", "sizes", "count"}, "instances");
    read_if(inst, "files", c.instance_files);
    if (inst.contains("model_class")) {
      std::string mc;
      read_if(inst, "model_class", mc);
      try {
        c.model_class = parse_model_class(mc);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    read_if(inst, "sizes", c.sizes);
    read_if(inst, "count", c.count);
  }
  std::vector<std::string> strategies;
  read_if(j, "strategies", strategies);
  for (const auto& s : strategies) c.strategies.push_back(StrategySpec::parse(s));
  read_if(j, "temperatures", c.temperatures);
  if (j.contains("temperature_grid")) {
    const auto& g = j.at("temperature_grid");
    reject_unknown(g, {"min", "max", "points"}, "temperature_grid");
    TemperatureGrid grid;
    read_if(g, "min", grid.min);
    read_if(g, "max", grid.max);
    read_if(g, "points", grid.points);
    c.temperature_grid = grid;
  }
  read_if(j, "chains", c.chains);
  if (j.contains("steps")) {
    const auto& s = j.at("steps");
    if (s.is_number_integer()) {
      if (s.get<std::int64_t>() < 0) throw ConfigError("steps must be non-negative");
      c.steps_classical = c.steps_quantum = s.get<std::size_t>();
    } else {
      reject_unknown(s, {"classical", "quantum"}, "steps");
      read_if(s, "classical", c.steps_classical);
      read_if(s, "quantum", c.steps_quantum);
    }
  }
  read_if(j, "record_stride", c.record_stride);
  read_if(j, "write_traces", c.write_traces);
  read_if(j, "seed", c.seed);
  read_if(j, "output_dir", c.output_dir);
  read_if(j, "workers", c.workers);
  if (j.contains("emulator")) {
    const auto& e = j.at("emulator");
    reject_unknown(e, {"mode", "trotter_slices", "dense_cap", "trotter_cap"}, "emulator");
    if (e.contains("mode")) {
      std::string mode;
      read_if(e, "mode", mode);
      c.emulator.mode = parse_mode(mode);
    }
    read_if(e, "trotter_slices", c.emulator.trotter_slices);
    read_if(e, "dense_cap", c.emulator.dense_cap);
    read_if(e, "trotter_cap", c.emulator.trotter_cap);
  }
  if (j.contains("spectral")) {
    const auto& s = j.at("spectral");
    reject_unknown(s, {"cap", "samples_per_row", "sampling", "bruteforce_samples",
                       "bootstrap_replicates"},
                   "spectral");
    read_if(s, "cap", c.spectral.spectral_cap);
    read_if(s, "samples_per_row", c.samples_per_row);
    if (s.contains("sampling")) {
      std::string sampling;
      read_if(s, "sampling", sampling);
      c.sampling = parse_sampling(sampling);
    }
    read_if(s, "bruteforce_samples", c.bruteforce_samples);
    read_if(s, "bootstrap_replicates", c.bootstrap_replicates);
  }
  if (j.contains("exact")) {
    const auto& e = j.at("exact");
    reject_unknown(e, {"enumeration_cap", "levels"}, "exact");
    read_if(e, "enumeration_cap", c.enumeration_cap);
    read_if(e, "levels", c.levels);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  json j = to_json(config);
  j.erase("output_dir");
  j.erase("workers");
  return fnv1a64(j.dump());
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

std::vector<std::string> preset_names() { return {"fig1-25spin", "fig2", "fig3", "fig5"}; }

ExperimentConfig preset_config(std::string_view name, std::string_view scale) {
  if (scale != "desk" && scale != "paper") {
    throw ConfigError("preset scale must be 'desk' or 'paper'");
  }
  const bool paper = scale == "paper";
  ExperimentConfig c;
  c.seed = 2024;
  const auto strategies = [](std::initializer_list<const char*> names) {
    std::vector<StrategySpec> out;
    for (const char* s : names) out.push_back(StrategySpec::parse(s));
    return out;
  };
  if (name == "fig2") {
    c.kind = ExperimentKind::temperature_sweep;
    c.sizes = {9};
    c.count = paper ? 100 : 20;
    c.strategies = strategies({"uniform", "local", "qemcmc", "cg_multiple_groups:3"});
    c.temperature_grid = TemperatureGrid{0.1, 100.0, paper ? std::size_t{16} : std::size_t{7}};
  } else if (name == "fig3") {
    c.kind = ExperimentKind::spectral_sweep;
    c.sizes = paper ? std::vector<std::size_t>{4, 5, 6, 7, 8, 9, 10}
                    : std::vector<std::size_t>{4, 5, 6, 7, 8, 9};
    c.count = paper ? 500 : 50;
    c.strategies = strategies({"uniform", "local", "qemcmc", "cg_naive:sqrt", "cg_improved:sqrt",
                               "cg_multiple_groups:sqrt"});
    c.temperatures = {1.0};
  } else if (name == "fig1-25spin") {
    c.kind = ExperimentKind::chain_ensemble;
    c.sizes = {25};
    c.count = 1;
    c.strategies = strategies({"uniform", "local", "cg_multiple_groups:5"});
    c.temperatures = {1.0};
    c.chains = 10;
    c.steps_classical = 100'000;
    c.steps_quantum = 10'000;
    c.record_stride = paper ? 10 : 100;
  } else if (name == "fig5") {
    c.kind = ExperimentKind::proposal_stats;
    c.sizes = {9};
    c.count = 1;
    c.strategies = strategies({"uniform", "local", "qemcmc", "cg_naive:3", "cg_improved:3",
                               "cg_multiple_groups:3"});
    c.temperatures = {1.0};
    c.steps_classical = paper ? 100'000 : 20'000;
    // A full 9-qubit proposal costs a 512 x 512 eigendecomposition.
    c.steps_quantum = paper ? 100'000 : 2'000;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.output_dir = "out/" + std::string(name) + "-" + std::string(scale);
  c.validate();
  return c;
}

}  // namespace cgq
