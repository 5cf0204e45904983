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

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "cgqemcmc/emulator.hpp"
#include "cgqemcmc/ising.hpp"

namespace cgq {

enum class ProposalKind {
  uniform,
  local_flip,
  qemcmc_full,
  cg_naive_local_group,
  cg_improved_local_group,
  cg_multiple_groups,
};

std::string to_string(ProposalKind kind);
ProposalKind parse_proposal_kind(std::string_view text);
bool is_coarse_grained(ProposalKind kind);
bool is_quantum(ProposalKind kind);

enum class GroupMode { naive, improved };

struct ProposalStrategy {
  ProposalKind kind = ProposalKind::local_flip;
  // Group size q; coarse-grained kinds only.
  std::size_t group_size = 0;
  // Number of groups for cg_multiple_groups; 0 means ceil(n / q).
  std::size_t group_count = 0;
  HyperparameterRanges ranges{};
  EmulatorSettings emulator{};

  static ProposalStrategy uniform() { return {ProposalKind::uniform}; }
  static ProposalStrategy local() { return {ProposalKind::local_flip}; }
  static ProposalStrategy qemcmc() { return {ProposalKind::qemcmc_full}; }
  static ProposalStrategy naive_group(std::size_t q) { return {ProposalKind::cg_naive_local_group, q}; }
  static ProposalStrategy improved_group(std::size_t q) {
    return {ProposalKind::cg_improved_local_group, q};
  }
  static ProposalStrategy multiple_groups(std::size_t q) { return {ProposalKind::cg_multiple_groups, q}; }

  // e.g. "local", "qemcmc", "cg_multiple_groups_q3".
  std::string label() const;
  // True when Q(s'|s) = Q(s|s') holds exactly. The multiple-groups proposal
  // is only assumed symmetric by the acceptance rule.
  bool symmetric_by_construction() const;
  std::size_t groups_for(std::size_t n) const;
  void validate(std::size_t n) const;
};

// Ordered spin indices of one group; offset is the starting spin r.
struct GroupSelection {
  std::size_t offset = 0;
  std::vector<std::size_t> indices;
};

// q consecutive indices modulo n starting at offset.
GroupSelection group_at(std::size_t n, std::size_t q, std::size_t offset);
GroupSelection select_group(std::size_t n, std::size_t q, Rng& rng);

// ceil(n/q) disjoint consecutive blocks starting at offset; the final block
// holds the remainder when q does not divide n.
std::vector<GroupSelection> partition_groups(std::size_t n, std::size_t q, std::size_t offset);

struct ReducedHamiltonian {
  Eigen::MatrixXd couplings;
  Eigen::VectorXd fields;
};

// Restriction of (J, h) to the group; everything outside is ignored.
ReducedHamiltonian reduced_hamiltonian_naive(const IsingInstance& instance,
                                             const GroupSelection& group);

// Group couplings plus the frozen environment folded into the fields:
// h~_i = h_i + sum_{j not in group} J_ij s_j.
ReducedHamiltonian reduced_hamiltonian_improved(const IsingInstance& instance,
                                                const GroupSelection& group,
                                                const SpinState& state);

// Bit a of the result is the bit of spin group.indices[a].
BasisIndex gather_bits(const SpinState& state, const GroupSelection& group);
void scatter_bits(SpinState& state, const GroupSelection& group, BasisIndex bits);

// One quantum proposal on a register: evolve |input> and measure once.
BasisIndex quantum_register_sample(const ReducedHamiltonian& reduced,
                                   const Hyperparameters& hyperparameters, BasisIndex input,
                                   const EmulatorSettings& settings, Rng& rng);

SpinState propose_uniform(const SpinState& state, Rng& rng);
SpinState propose_local(const SpinState& state, Rng& rng);

SpinState propose_qemcmc(const IsingInstance& instance, const SpinState& state, Rng& rng,
                         const HyperparameterRanges& ranges = {},
                         const EmulatorSettings& settings = {});

SpinState propose_cg_single_group(const IsingInstance& instance, const SpinState& state,
                                  std::size_t q, GroupMode mode, Rng& rng,
                                  const HyperparameterRanges& ranges = {},
                                  const EmulatorSettings& settings = {});

// Groups are visited in order, each against the current working state, with
// fresh hyperparameters per group. No acceptance step happens in here.
SpinState propose_cg_multiple_groups(const IsingInstance& instance, const SpinState& state,
                                     std::size_t q, Rng& rng,
                                     const HyperparameterRanges& ranges = {},
                                     const EmulatorSettings& settings = {});

SpinState propose(const ProposalStrategy& strategy, const IsingInstance& instance,
                  const SpinState& state, Rng& rng);

}  // namespace cgq
