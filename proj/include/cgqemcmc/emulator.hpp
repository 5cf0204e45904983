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

// Statevector emulation of the proposal unitary U = exp(-i H t) with
//
//   H = (1 - gamma) * alpha * H_prob + gamma * sum_j X_j,
//
// where H_prob is diagonal in the computational basis and holds the Ising
// energy of each basis state under s_j = 1 - 2 b_j.

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <vector>

#include "cgqemcmc/common.hpp"

namespace cgq {

using StateVector = Eigen::VectorXcd;

struct HyperparameterRanges {
  // gamma is drawn from the open interval, time from the integers inclusive.
  double gamma_min = 0.25;
  double gamma_max = 0.6;
  int time_min = 2;
  int time_max = 20;

  void validate() const;
};

struct Hyperparameters {
  double gamma = 0.0;
  double time = 0.0;
};

Hyperparameters sample_hyperparameters(const HyperparameterRanges& ranges, Rng& rng);

enum class EvolutionMode { exact, trotter };

struct EmulatorSettings {
  EvolutionMode mode = EvolutionMode::exact;
  // 0 selects ceil(10 * t).
  int trotter_slices = 0;
  std::size_t dense_cap = 12;
  std::size_t trotter_cap = 24;
};

struct ProposalHamiltonian {
  Eigen::MatrixXd couplings;  // q x q symmetric; only j > k entries are read
  Eigen::VectorXd fields;
  double gamma = 0.5;
  double time = 1.0;
  double alpha = 1.0;

  std::size_t qubits() const { return static_cast<std::size_t>(fields.size()); }
  // Throws unless gamma/time lie in `ranges` (time integral).
  void check_ranges(const HyperparameterRanges& ranges) const;
};

// sqrt(q) / sqrt(sum_{j>k} J_jk^2 + sum_j h_j^2); throws
// DegenerateInstanceError for an all-zero problem Hamiltonian.
double alpha_normalization(const Eigen::MatrixXd& couplings, const Eigen::VectorXd& fields);

// Builds the Hamiltonian with alpha from alpha_normalization. When the
// problem part is identically zero alpha multiplies nothing and is set to 1.
ProposalHamiltonian make_proposal_hamiltonian(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
                                              const Hyperparameters& hyperparameters);

// Ising energy of every basis state of the q-qubit register.
std::vector<double> problem_diagonal(const Eigen::MatrixXd& couplings,
                                     const Eigen::VectorXd& fields);

Eigen::MatrixXd dense_hamiltonian(const ProposalHamiltonian& ham);

// exp(-i H t) through the eigendecomposition of the real symmetric H.
// U is complex symmetric (U^T = U), so |U_ij|^2 = |U_ji|^2.
class ExactPropagator {
 public:
  explicit ExactPropagator(const ProposalHamiltonian& ham, std::size_t dense_cap = 12);

  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  StateVector column(BasisIndex input) const;
  Eigen::MatrixXcd unitary() const;
  // Entry (i, j) is |<j|U|i>|^2, the probability of measuring j from input i.
  Eigen::MatrixXd transition_probabilities() const;

 private:
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd eigenvalues_;
  double time_;
};

StateVector basis_state(std::size_t qubits, BasisIndex index);

StateVector evolve_exact(const ProposalHamiltonian& ham, BasisIndex input,
                         std::size_t dense_cap = 12);

// Second-order splitting per slice: diagonal phase for t/(2 slices), the
// X rotations for t/slices, diagonal phase for t/(2 slices).
StateVector evolve_trotter(const ProposalHamiltonian& ham, BasisIndex input, int slices,
                           std::size_t trotter_cap = 24);

int default_trotter_slices(double time);

StateVector evolve(const ProposalHamiltonian& ham, BasisIndex input,
                   const EmulatorSettings& settings);

// Samples a basis index from |amplitude|^2; the state must be normalised
// to within 1e-8.
BasisIndex measure_sample(const StateVector& psi, Rng& rng);

// |<s'|U|s>|^2 for every s', with exact evolution.
std::vector<double> proposal_distribution_row(const ProposalHamiltonian& ham, BasisIndex input,
                                              std::size_t dense_cap = 12);

// Debug dump: one "index real imaginary" line per amplitude.
void write_statevector(std::ostream& out, const StateVector& psi);

}  // namespace cgq
