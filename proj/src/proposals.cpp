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

#include "cgqemcmc/proposals.hpp"

#include <stdexcept>

namespace cgq {

namespace {

void check_group_size(std::size_t n, std::size_t q) {
  if (q < 1 || q > n) {
    throw std::invalid_argument("group size must satisfy 1 <= q <= n (q=" + std::to_string(q) +
                                ", n=" + std::to_string(n) + ")");
  }
}

void check_register_cap(std::size_t qubits, const EmulatorSettings& settings) {
  const std::size_t cap =
      settings.mode == EvolutionMode::exact ? settings.dense_cap : settings.trotter_cap;
  if (qubits > cap) {
    throw ResourceLimitError("quantum proposal on " + std::to_string(qubits) +
                             " qubits exceeds the emulator cap of " + std::to_string(cap));
  }
}

}  // namespace

std::string to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::uniform:
      return "uniform";
    case ProposalKind::local_flip:
      return "local";
    case ProposalKind::qemcmc_full:
      return "qemcmc";
    case ProposalKind::cg_naive_local_group:
      return "cg_naive";
    case ProposalKind::cg_improved_local_group:
      return "cg_improved";
    case ProposalKind::cg_multiple_groups:
      return "cg_multiple_groups";
  }
  return "unknown";
}

ProposalKind parse_proposal_kind(std::string_view text) {
  if (text == "uniform") return ProposalKind::uniform;
  if (text == "local" || text == "local_flip") return ProposalKind::local_flip;
  if (text == "qemcmc" || text == "qemcmc_full") return ProposalKind::qemcmc_full;
  if (text == "cg_naive" || text == "cg_naive_local_group") return ProposalKind::cg_naive_local_group;
  if (text == "cg_improved" || text == "cg_improved_local_group") {
    return ProposalKind::cg_improved_local_group;
  }
  if (text == "cg_multiple_groups" || text == "cg_multi") return ProposalKind::cg_multiple_groups;
  throw std::invalid_argument("unknown proposal kind '" + std::string(text) + "'");
}

bool is_coarse_grained(ProposalKind kind) {
  return kind == ProposalKind::cg_naive_local_group ||
         kind == ProposalKind::cg_improved_local_group || kind == ProposalKind::cg_multiple_groups;
}

bool is_quantum(ProposalKind kind) {
  return kind == ProposalKind::qemcmc_full || is_coarse_grained(kind);
}

std::string ProposalStrategy::label() const {
  std::string out = to_string(kind);
  if (is_coarse_grained(kind)) out += "_q" + std::to_string(group_size);
  return out;
}

bool ProposalStrategy::symmetric_by_construction() const {
  return kind != ProposalKind::cg_multiple_groups;
}

std::size_t ProposalStrategy::groups_for(std::size_t n) const {
  if (kind != ProposalKind::cg_multiple_groups) return is_coarse_grained(kind) ? 1 : 0;
  return group_size == 0 ? 0 : (n + group_size - 1) / group_size;
}

void ProposalStrategy::validate(std::size_t n) const {
  ranges.validate();
  if (!is_coarse_grained(kind)) return;
  check_group_size(n, group_size);
  if (kind == ProposalKind::cg_multiple_groups && group_count != 0) {
    if (group_count * group_size < n || (group_count - 1) * group_size >= n) {
      throw std::invalid_argument("group count must be ceil(n / q) so that groups cover all spins");
    }
  }
}

GroupSelection group_at(std::size_t n, std::size_t q, std::size_t offset) {
  check_group_size(n, q);
  if (offset >= n) throw std::invalid_argument("group offset must be below n");
  GroupSelection group;
  group.offset = offset;
  group.indices.resize(q);
  for (std::size_t a = 0; a < q; ++a) group.indices[a] = (offset + a) % n;
  return group;
}

GroupSelection select_group(std::size_t n, std::size_t q, Rng& rng) {
  check_group_size(n, q);
  return group_at(n, q, uniform_index(rng, n));
}

std::vector<GroupSelection> partition_groups(std::size_t n, std::size_t q, std::size_t offset) {
  check_group_size(n, q);
  if (offset >= n) throw std::invalid_argument("partition offset must be below n");
  std::vector<GroupSelection> groups;
  for (std::size_t start = 0; start < n; start += q) {
    GroupSelection group;
    group.offset = (offset + start) % n;
    const std::size_t size = std::min(q, n - start);
    group.indices.resize(size);
    for (std::size_t a = 0; a < size; ++a) group.indices[a] = (offset + start + a) % n;
    groups.push_back(std::move(group));
  }
  return groups;
}

ReducedHamiltonian reduced_hamiltonian_naive(const IsingInstance& instance,
                                             const GroupSelection& group) {
  const auto q = static_cast<Eigen::Index>(group.indices.size());
  ReducedHamiltonian out{Eigen::MatrixXd::Zero(q, q), Eigen::VectorXd::Zero(q)};
  for (Eigen::Index a = 0; a < q; ++a) {
    const auto i = group.indices[static_cast<std::size_t>(a)];
    out.fields(a) = instance.field(i);
    for (Eigen::Index b = 0; b < q; ++b) {
      out.couplings(a, b) = instance.coupling(i, group.indices[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

ReducedHamiltonian reduced_hamiltonian_improved(const IsingInstance& instance,
                                                const GroupSelection& group,
                                                const SpinState& state) {
  if (state.size() != instance.size()) throw std::invalid_argument("state/instance size mismatch");
  ReducedHamiltonian out = reduced_hamiltonian_naive(instance, group);
  std::vector<bool> in_group(instance.size(), false);
  for (auto i : group.indices) in_group[i] = true;
  for (std::size_t a = 0; a < group.indices.size(); ++a) {
    const auto i = group.indices[a];
    double environment = 0.0;
    for (std::size_t j = 0; j < instance.size(); ++j) {
      if (!in_group[j]) environment += instance.coupling(i, j) * state[j];
    }
    out.fields(static_cast<Eigen::Index>(a)) += environment;
  }
  return out;
}

BasisIndex gather_bits(const SpinState& state, const GroupSelection& group) {
  BasisIndex bits = 0;
  for (std::size_t a = 0; a < group.indices.size(); ++a) {
    if (state[group.indices[a]] < 0) bits |= BasisIndex{1} << a;
  }
  return bits;
}

void scatter_bits(SpinState& state, const GroupSelection& group, BasisIndex bits) {
  for (std::size_t a = 0; a < group.indices.size(); ++a) {
    state.set(group.indices[a], ((bits >> a) & 1U) ? -1 : 1);
  }
}

BasisIndex quantum_register_sample(const ReducedHamiltonian& reduced,
                                   const Hyperparameters& hyperparameters, BasisIndex input,
                                   const EmulatorSettings& settings, Rng& rng) {
  check_register_cap(static_cast<std::size_t>(reduced.fields.size()), settings);
  const auto ham = make_proposal_hamiltonian(reduced.couplings, reduced.fields, hyperparameters);
  return measure_sample(evolve(ham, input, settings), rng);
}

SpinState propose_uniform(const SpinState& state, Rng& rng) {
  SpinState out = state;
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, (rng() >> 63) ? -1 : 1);
  return out;
}

SpinState propose_local(const SpinState& state, Rng& rng) {
  SpinState out = state;
  out.flip(uniform_index(rng, state.size()));
  return out;
}

SpinState propose_qemcmc(const IsingInstance& instance, const SpinState& state, Rng& rng,
                         const HyperparameterRanges& ranges, const EmulatorSettings& settings) {
  const std::size_t n = instance.size();
  check_register_cap(n, settings);
  const auto hp = sample_hyperparameters(ranges, rng);
  const ReducedHamiltonian full{instance.couplings(), instance.fields()};
  return SpinState::from_bits(quantum_register_sample(full, hp, state.to_bits(), settings, rng), n);
}

SpinState propose_cg_single_group(const IsingInstance& instance, const SpinState& state,
                                  std::size_t q, GroupMode mode, Rng& rng,
                                  const HyperparameterRanges& ranges,
                                  const EmulatorSettings& settings) {
  check_register_cap(q, settings);
  const auto group = select_group(instance.size(), q, rng);
  const auto reduced = mode == GroupMode::naive
                           ? reduced_hamiltonian_naive(instance, group)
                           : reduced_hamiltonian_improved(instance, group, state);
  const auto hp = sample_hyperparameters(ranges, rng);
  const auto bits = quantum_register_sample(reduced, hp, gather_bits(state, group), settings, rng);
  SpinState out = state;
  scatter_bits(out, group, bits);
  return out;
}

SpinState propose_cg_multiple_groups(const IsingInstance& instance, const SpinState& state,
                                     std::size_t q, Rng& rng, const HyperparameterRanges& ranges,
                                     const EmulatorSettings& settings) {
  check_register_cap(q, settings);
  const std::size_t n = instance.size();
  check_group_size(n, q);
  const auto groups = partition_groups(n, q, uniform_index(rng, n));
  SpinState working = state;
  for (const auto& group : groups) {
    const auto reduced = reduced_hamiltonian_improved(instance, group, working);
    const auto hp = sample_hyperparameters(ranges, rng);
    const auto bits =
        quantum_register_sample(reduced, hp, gather_bits(working, group), settings, rng);
    scatter_bits(working, group, bits);
  }
  return working;
}

SpinState propose(const ProposalStrategy& strategy, const IsingInstance& instance,
                  const SpinState& state, Rng& rng) {
  switch (strategy.kind) {
    case ProposalKind::uniform:
      return propose_uniform(state, rng);
    case ProposalKind::local_flip:
      return propose_local(state, rng);
    case ProposalKind::qemcmc_full:
      return propose_qemcmc(instance, state, rng, strategy.ranges, strategy.emulator);
    case ProposalKind::cg_naive_local_group:
      return propose_cg_single_group(instance, state, strategy.group_size, GroupMode::naive, rng,
                                     strategy.ranges, strategy.emulator);
    case ProposalKind::cg_improved_local_group:
      return propose_cg_single_group(instance, state, strategy.group_size, GroupMode::improved,
                                     rng, strategy.ranges, strategy.emulator);
    case ProposalKind::cg_multiple_groups:
      return propose_cg_multiple_groups(instance, state, strategy.group_size, rng,
                                        strategy.ranges, strategy.emulator);
  }
  throw std::invalid_argument("unknown proposal kind");
}

}  // namespace cgq
