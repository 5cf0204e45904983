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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgqemcmc/ising.hpp"
#include "cgqemcmc/proposals.hpp"

namespace cgq {

// Chain state after one Metropolis-Hastings step, plus what was proposed.
struct StepRecord {
  double energy = 0.0;
  double magnetisation = 0.0;
  double proposed_energy_delta = 0.0;
  double uniform_draw = 0.0;
  std::uint32_t proposed_hamming = 0;
  bool accepted = false;
};

struct ChainOptions {
  std::optional<SpinState> initial;
  // States of the first `state_cap` steps are stored; after that only every
  // `snapshot_stride`-th step keeps its state. Scalars are always kept.
  std::size_t state_cap = 10'000'000;
  std::size_t snapshot_stride = 1000;
};

class ChainTrace {
 public:
  ChainTrace() = default;
  ChainTrace(std::size_t n, std::size_t state_cap, std::size_t snapshot_stride);

  std::size_t spins() const { return n_; }
  std::size_t size() const { return steps_.size(); }
  const std::vector<StepRecord>& steps() const { return steps_; }
  const StepRecord& operator[](std::size_t k) const { return steps_[k]; }

  bool has_state(std::size_t k) const;
  SpinState state(std::size_t k) const;
  // Packed index of the state at step k (n <= 64, state stored).
  BasisIndex state_bits(std::size_t k) const;

  void append(const StepRecord& record, const SpinState& state);

  SpinState initial_state;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string instance_id;
  double temperature = 0.0;

 private:
  std::size_t words_per_state() const { return (n_ + 63) / 64; }
  std::size_t storage_slot(std::size_t k) const;

  std::size_t n_ = 0;
  std::size_t state_cap_ = 0;
  std::size_t stride_ = 1;
  std::vector<StepRecord> steps_;
  std::vector<std::uint64_t> words_;
};

// Metropolis-Hastings with the symmetric-proposal acceptance
// min(1, exp((E - E') / T)) for every strategy. Deterministic in `seed`.
ChainTrace run_chain(const IsingInstance& instance, const ProposalStrategy& strategy,
                     double temperature, std::size_t steps, std::uint64_t seed,
                     const ChainOptions& options = {});

struct ChainSummary {
  std::vector<double> cumulative_magnetisation;
  std::vector<double> cumulative_energy;
  std::optional<std::size_t> found_ground_state_at;
  double acceptance_rate = 0.0;
};

// Running means over every prefix of the trace. With a ground-state energy,
// reports the first step whose energy reaches it (within 1e-9).
ChainSummary summarize(const ChainTrace& trace, std::optional<double> ground_energy = {});
ChainSummary summarize(const ChainTrace& trace, const ExactDistribution& exact);

struct ProposalStatistics {
  // hamming_counts[d]: proposals at Hamming distance d.
  std::vector<std::size_t> hamming_counts;
  std::vector<double> hamming_cdf;
  // |dE| of every proposal, ascending.
  std::vector<double> sorted_abs_energy_delta;

  std::size_t proposals() const { return sorted_abs_energy_delta.size(); }
  // Fraction of proposals with |dE| <= x.
  double energy_cdf(double x) const;
};

ProposalStatistics proposal_statistics(const ChainTrace& trace);

// step,state,energy,magnetisation,proposed_hamming,proposed_dE,accepted
void write_trace_csv(std::ostream& out, const ChainTrace& trace);

}  // namespace cgq
