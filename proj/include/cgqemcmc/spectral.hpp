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

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cgqemcmc/ising.hpp"
#include "cgqemcmc/proposals.hpp"

namespace cgq {

struct SpectralLimits {
  std::size_t spectral_cap = 10;
};

// Q is the row-stochastic proposal matrix (row = current state), A the
// Metropolis factors, and P = A o Q with rejected mass on the diagonal.
struct TransitionMatrix {
  std::size_t n = 0;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd A;
  Eigen::MatrixXd P;
  Eigen::VectorXcd eigenvalues;
  double delta = 0.0;
  bool reducible = false;
  double asymmetry = 0.0;
  std::size_t samples = 0;
};

struct GapResult {
  double delta = 0.0;
  // More than one eigenvalue within 1e-6 of 1.
  bool reducible = false;
  std::size_t unit_eigenvalues = 0;
  Eigen::VectorXcd eigenvalues;
};

// Absolute spectral gap 1 - max_{lambda != 1} |lambda|. Exactly one unit
// eigenvalue (largest real part within 1e-6 of 1) is excluded; further ones
// set `reducible` and count towards the maximum.
GapResult spectral_gap(const Eigen::MatrixXd& P);

Eigen::MatrixXd acceptance_matrix(std::span<const double> energies, double temperature);
Eigen::MatrixXd transition_from_proposal(const Eigen::MatrixXd& Q, std::span<const double> energies,
                                         double temperature);
double max_asymmetry(const Eigen::MatrixXd& Q);

TransitionMatrix assemble_transition(Eigen::MatrixXd Q, std::span<const double> energies,
                                     double temperature, std::size_t samples = 0);

// Uniform: 1/2^n everywhere. Local: 1/n between Hamming neighbours.
Eigen::MatrixXd classical_proposal_matrix(std::size_t n, ProposalKind kind);

TransitionMatrix build_P_classical(const IsingInstance& instance, ProposalKind kind,
                                   double temperature, const SpectralLimits& limits = {});

enum class RowSampling {
  // One (gamma, t, group) draw shared by every row: symmetric by construction.
  paired,
  // Fresh draws for every row.
  independent,
};

struct RowwiseOptions {
  std::size_t samples_per_row = 30;
  RowSampling sampling = RowSampling::paired;
  std::uint64_t seed = 0;
  // Keep every draw's contribution so bootstrap replicates can be formed.
  bool keep_draws = false;
};

struct ProposalEstimate {
  Eigen::MatrixXd Q;
  // Draws per row (row-wise) or proposal steps (brute force).
  std::size_t samples = 0;
  std::vector<Eigen::MatrixXd> draws;
  std::vector<std::pair<BasisIndex, BasisIndex>> transitions;
  std::size_t empty_rows = 0;
};

// Row-wise Monte-Carlo average of emulator rows over hyperparameter (and,
// for single-group kinds, group) draws. Valid for qemcmc_full and the
// single-group coarse-grained kinds.
ProposalEstimate estimate_Q_rowwise(const IsingInstance& instance, const ProposalStrategy& strategy,
                                    const RowwiseOptions& options = {},
                                    const SpectralLimits& limits = {});

// Counts of single proposal steps from uniformly random starts, rows
// renormalised by observed mass. n_s = 0 selects (2^n)^2. Unvisited rows
// become self-loops and are counted in empty_rows.
ProposalEstimate estimate_Q_bruteforce(const IsingInstance& instance,
                                       const ProposalStrategy& strategy, std::size_t n_s,
                                       std::uint64_t seed, bool keep_transitions = false,
                                       const SpectralLimits& limits = {});

TransitionMatrix build_Q_quantum_rowwise(const IsingInstance& instance,
                                         const ProposalStrategy& strategy, double temperature,
                                         const RowwiseOptions& options = {},
                                         const SpectralLimits& limits = {});

TransitionMatrix build_Q_quantum_bruteforce(const IsingInstance& instance,
                                            const ProposalStrategy& strategy, double temperature,
                                            std::size_t n_s = 0, std::uint64_t seed = 0,
                                            const SpectralLimits& limits = {});

struct BootstrapResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::vector<double> replicates;
};

// Spread of the spectral gap over bootstrap resamples of the stored draws
// (row-wise) or transitions (brute force).
BootstrapResult bootstrap_gap(const ProposalEstimate& estimate, std::span<const double> energies,
                              double temperature, std::size_t replicates, std::uint64_t seed);

// max_{s,s'} |mu(s) P(s'|s) - mu(s') P(s|s')|.
double detailed_balance_violation(const Eigen::MatrixXd& P, std::span<const double> mu);

// Median over nonzero off-diagonal entries of the bootstrap standard error
// of mu(s) P(s'|s).
double bootstrap_flux_noise_floor(const ProposalEstimate& estimate,
                                  std::span<const double> energies, std::span<const double> mu,
                                  double temperature, std::size_t replicates, std::uint64_t seed);

struct ThermalisationBounds {
  double epsilon = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double min_mu = 0.0;
};

// (1/delta - 1) ln(1/(2 eps)) <= tau_eps <= (1/delta) ln(1/(eps min_mu)).
ThermalisationBounds thermalisation_bounds(double delta, double epsilon, double min_mu);

// max over starting states of the total-variation distance of P^t(x, .) from mu.
std::vector<double> worst_case_tv_curve(const Eigen::MatrixXd& P, std::span<const double> mu,
                                        std::size_t max_steps);

// Smallest t with worst-case TV below epsilon, or max_steps + 1 if never.
std::size_t mixing_time(const Eigen::MatrixXd& P, std::span<const double> mu, double epsilon,
                        std::size_t max_steps);

// --- ensemble statistics and scaling fits -------------------------------

struct GapEstimate {
  double mean = 0.0;
  double error = 0.0;
};

struct EnsembleStats {
  double mean = 0.0;
  double standard_error = 0.0;
  // Mean of log(delta) and its standard error.
  double log_mean = 0.0;
  double log_standard_error = 0.0;
  std::size_t count = 0;
};

EnsembleStats ensemble_stats(std::span<const double> deltas);

// Linear interpolation in q at sqrt(n) between the bracketing integer group
// sizes, errors propagated linearly in quadrature.
GapEstimate interpolate_sqrt_n_gap(const std::map<std::size_t, GapEstimate>& gaps, std::size_t n);

struct ScalingPoint {
  double n = 0.0;
  double delta = 0.0;
  double delta_err = 0.0;
};

// delta = a * 2^(-k n).
struct ScalingFit {
  double a = 0.0;
  double k = 0.0;
  double k_err = 0.0;
  double log2_a_err = 0.0;
  double chi2 = 0.0;
  std::size_t points = 0;
};

// Weighted least squares of log2(delta) against n over at least three
// distinct sizes, with sigma = delta_err / (delta ln 2). With any zero error
// the fit is unweighted and k_err comes from the residual scatter.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

double quantum_enhancement_factor(double k_quantum, double k_classical_best);

}  // namespace cgq
