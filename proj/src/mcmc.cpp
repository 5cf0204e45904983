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

#include "cgqemcmc/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cgq {

ChainTrace::ChainTrace(std::size_t n, std::size_t state_cap, std::size_t snapshot_stride)
    : n_(n), state_cap_(state_cap), stride_(std::max<std::size_t>(1, snapshot_stride)) {}

bool ChainTrace::has_state(std::size_t k) const {
  if (k >= steps_.size()) return false;
  return k < state_cap_ || (k - state_cap_) % stride_ == 0;
}

std::size_t ChainTrace::storage_slot(std::size_t k) const {
  return k < state_cap_ ? k : state_cap_ + (k - state_cap_) / stride_;
}

void ChainTrace::append(const StepRecord& record, const SpinState& state) {
  const std::size_t k = steps_.size();
  steps_.push_back(record);
  if (!has_state(k)) return;
  const std::size_t base = words_.size();
  words_.resize(base + words_per_state(), 0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (state[i] < 0) words_[base + i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

SpinState ChainTrace::state(std::size_t k) const {
  if (!has_state(k)) throw std::out_of_range("trace step has no stored state");
  const std::size_t base = storage_slot(k) * words_per_state();
  std::vector<std::int8_t> spins(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    spins[i] = ((words_[base + i / 64] >> (i % 64)) & 1U) ? -1 : 1;
  }
  return SpinState(std::move(spins));
}

BasisIndex ChainTrace::state_bits(std::size_t k) const {
  if (n_ > 64) throw std::invalid_argument("packed states hold at most 64 spins");
  if (!has_state(k)) throw std::out_of_range("trace step has no stored state");
  return words_[storage_slot(k)];
}

ChainTrace run_chain(const IsingInstance& instance, const ProposalStrategy& strategy,
                     double temperature, std::size_t steps, std::uint64_t seed,
                     const ChainOptions& options) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (steps < 1) throw std::invalid_argument("a chain needs at least one step");
  const std::size_t n = instance.size();
  strategy.validate(n);

  Rng rng(seed);
  SpinState state;
  if (options.initial) {
    if (options.initial->size() != n) throw std::invalid_argument("initial state has wrong size");
    state = *options.initial;
  } else {
    state = propose_uniform(SpinState::all_up(n), rng);
  }

  ChainTrace trace(n, options.state_cap, options.snapshot_stride);
  trace.initial_state = state;
  trace.seed = seed;
  trace.strategy = strategy.label();
  trace.instance_id = instance.instance_id();
  trace.temperature = temperature;

  double current_energy = energy(instance, state);
  double current_m = magnetisation(state);
  for (std::size_t k = 0; k < steps; ++k) {
    SpinState candidate = propose(strategy, instance, state, rng);
    const double candidate_energy = energy(instance, candidate);
    StepRecord record;
    record.proposed_energy_delta = candidate_energy - current_energy;
    record.proposed_hamming = static_cast<std::uint32_t>(hamming_distance(state, candidate));
    record.uniform_draw = uniform01(rng);
    record.accepted =
        record.uniform_draw < metropolis_acceptance(record.proposed_energy_delta, temperature);
    if (record.accepted) {
      state = std::move(candidate);
      current_energy = candidate_energy;
      current_m = magnetisation(state);
    }
    record.energy = current_energy;
    record.magnetisation = current_m;
    trace.append(record, state);
  }
  return trace;
}

ChainSummary summarize(const ChainTrace& trace, std::optional<double> ground_energy) {
  ChainSummary out;
  const std::size_t steps = trace.size();
  out.cumulative_magnetisation.resize(steps);
  out.cumulative_energy.resize(steps);
  double sum_m = 0.0;
  double sum_e = 0.0;
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& r = trace[k];
    sum_m += r.magnetisation;
    sum_e += r.energy;
    accepted += r.accepted ? 1 : 0;
    out.cumulative_magnetisation[k] = sum_m / static_cast<double>(k + 1);
    out.cumulative_energy[k] = sum_e / static_cast<double>(k + 1);
    if (ground_energy && !out.found_ground_state_at && r.energy <= *ground_energy + 1e-9) {
      out.found_ground_state_at = k;
    }
  }
  out.acceptance_rate = steps ? static_cast<double>(accepted) / static_cast<double>(steps) : 0.0;
  return out;
}

ChainSummary summarize(const ChainTrace& trace, const ExactDistribution& exact) {
  return summarize(trace, exact.ground_state().energy);
}

double ProposalStatistics::energy_cdf(double x) const {
  if (sorted_abs_energy_delta.empty()) return 0.0;
  const auto it =
      std::upper_bound(sorted_abs_energy_delta.begin(), sorted_abs_energy_delta.end(), x);
  return static_cast<double>(it - sorted_abs_energy_delta.begin()) /
         static_cast<double>(sorted_abs_energy_delta.size());
}

ProposalStatistics proposal_statistics(const ChainTrace& trace) {
  ProposalStatistics out;
  out.hamming_counts.assign(trace.spins() + 1, 0);
  out.sorted_abs_energy_delta.reserve(trace.size());
  for (const auto& r : trace.steps()) {
    ++out.hamming_counts.at(r.proposed_hamming);
    out.sorted_abs_energy_delta.push_back(std::abs(r.proposed_energy_delta));
  }
  std::sort(out.sorted_abs_energy_delta.begin(), out.sorted_abs_energy_delta.end());
  out.hamming_cdf.resize(out.hamming_counts.size());
  std::size_t running = 0;
  for (std::size_t d = 0; d < out.hamming_counts.size(); ++d) {
    running += out.hamming_counts[d];
    out.hamming_cdf[d] =
        trace.size() ? static_cast<double>(running) / static_cast<double>(trace.size()) : 0.0;
  }
  return out;
}

void write_trace_csv(std::ostream& out, const ChainTrace& trace) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "step,state,energy,magnetisation,proposed_hamming,proposed_dE,accepted\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& r = trace[k];
    out << k + 1 << ',' << (trace.has_state(k) ? trace.state(k).to_bitstring() : std::string())
        << ',' << r.energy << ',' << r.magnetisation << ',' << r.proposed_hamming << ','
        << r.proposed_energy_delta << ',' << (r.accepted ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

}  // namespace cgq
