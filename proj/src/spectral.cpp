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

#include "cgqemcmc/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cgq {

namespace {

constexpr double kUnitTolerance = 1e-6;

void check_spectral_cap(std::size_t n, const SpectralLimits& limits) {
  if (n > limits.spectral_cap) {
    throw ResourceLimitError("spectral analysis is capped at " +
                             std::to_string(limits.spectral_cap) + " spins (instance has " +
                             std::to_string(n) + ")");
  }
}

// Row i, column j: probability of measuring j from input i on the register.
// U is symmetric, so the result is symmetrised to remove rounding asymmetry.
Eigen::MatrixXd register_transitions(const ReducedHamiltonian& reduced, const Hyperparameters& hp,
                                     const EmulatorSettings& settings) {
  const auto ham = make_proposal_hamiltonian(reduced.couplings, reduced.fields, hp);
  Eigen::MatrixXd out;
  if (settings.mode == EvolutionMode::exact) {
    out = ExactPropagator(ham, settings.dense_cap).transition_probabilities();
  } else {
    const auto dim = Eigen::Index{1} << ham.qubits();
    out.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      out.row(i) = evolve(ham, static_cast<BasisIndex>(i), settings).cwiseAbs2().transpose();
    }
  }
  const Eigen::MatrixXd transposed = out.transpose();
  return 0.5 * (out + transposed);
}

Eigen::VectorXd register_row(const ReducedHamiltonian& reduced, const Hyperparameters& hp,
                             BasisIndex input, const EmulatorSettings& settings) {
  const auto ham = make_proposal_hamiltonian(reduced.couplings, reduced.fields, hp);
  return evolve(ham, input, settings).cwiseAbs2();
}

// Maps between a group register and full basis indices.
struct Embedding {
  GroupSelection group;
  std::vector<BasisIndex> group_offsets;  // register index -> full-index bits
  std::vector<std::size_t> environment;   // spins outside the group

  Embedding(std::size_t n, const GroupSelection& g) : group(g) {
    const std::size_t q = g.indices.size();
    group_offsets.resize(std::size_t{1} << q);
    for (std::size_t a = 0; a < group_offsets.size(); ++a) {
      BasisIndex bits = 0;
      for (std::size_t m = 0; m < q; ++m) {
        if ((a >> m) & 1U) bits |= BasisIndex{1} << g.indices[m];
      }
      group_offsets[a] = bits;
    }
    std::vector<bool> in_group(n, false);
    for (auto i : g.indices) in_group[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_group[i]) environment.push_back(i);
    }
  }

  BasisIndex environment_base(BasisIndex env_bits) const {
    BasisIndex bits = 0;
    for (std::size_t m = 0; m < environment.size(); ++m) {
      if ((env_bits >> m) & 1U) bits |= BasisIndex{1} << environment[m];
    }
    return bits;
  }

  BasisIndex group_mask() const { return group_offsets.back(); }

  BasisIndex register_index(BasisIndex full) const {
    BasisIndex a = 0;
    for (std::size_t m = 0; m < group.indices.size(); ++m) {
      if ((full >> group.indices[m]) & 1U) a |= BasisIndex{1} << m;
    }
    return a;
  }
};

ReducedHamiltonian group_hamiltonian(const IsingInstance& instance, const Embedding& embedding,
                                     ProposalKind kind, BasisIndex full_state) {
  if (kind == ProposalKind::cg_naive_local_group) {
    return reduced_hamiltonian_naive(instance, embedding.group);
  }
  return reduced_hamiltonian_improved(instance, embedding.group,
                                      SpinState::from_bits(full_state, instance.size()));
}

// One paired draw of a single-group proposal, embedded in the full space.
void add_group_draw(const IsingInstance& instance, const ProposalStrategy& strategy,
                    const Embedding& embedding, const Hyperparameters& hp, Eigen::MatrixXd& Q,
                    double weight) {
  const std::size_t env_states = std::size_t{1} << embedding.environment.size();
  Eigen::MatrixXd shared;
  if (strategy.kind == ProposalKind::cg_naive_local_group) {
    shared = register_transitions(reduced_hamiltonian_naive(instance, embedding.group), hp,
                                  strategy.emulator);
  }
  const auto dim = embedding.group_offsets.size();
  for (std::size_t e = 0; e < env_states; ++e) {
    const BasisIndex base = embedding.environment_base(e);
    const Eigen::MatrixXd block =
        strategy.kind == ProposalKind::cg_naive_local_group
            ? shared
            : register_transitions(group_hamiltonian(instance, embedding, strategy.kind, base), hp,
                                   strategy.emulator);
    for (std::size_t a = 0; a < dim; ++a) {
      const auto row = static_cast<Eigen::Index>(base | embedding.group_offsets[a]);
      for (std::size_t b = 0; b < dim; ++b) {
        Q(row, static_cast<Eigen::Index>(base | embedding.group_offsets[b])) +=
            weight * block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
}

void check_rowwise_kind(const ProposalStrategy& strategy) {
  if (strategy.kind != ProposalKind::qemcmc_full &&
      strategy.kind != ProposalKind::cg_naive_local_group &&
      strategy.kind != ProposalKind::cg_improved_local_group) {
    throw std::invalid_argument("row-wise estimation applies to qemcmc and single-group kinds, not " +
                                strategy.label());
  }
}

Eigen::MatrixXd normalise_rows(const Eigen::MatrixXd& counts, std::size_t* empty_rows) {
  Eigen::MatrixXd Q = counts;
  std::size_t empty = 0;
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    const double mass = Q.row(i).sum();
    if (mass > 0.0) {
      Q.row(i) /= mass;
    } else {
      Q(i, i) = 1.0;
      ++empty;
    }
  }
  if (empty_rows) *empty_rows = empty;
  return Q;
}

}  // namespace

GapResult spectral_gap(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols() || P.rows() == 0) throw std::invalid_argument("P must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(P, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  GapResult out;
  out.eigenvalues = solver.eigenvalues();
  const auto count = out.eigenvalues.size();
  Eigen::Index unit = -1;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (std::abs(out.eigenvalues(i) - 1.0) < kUnitTolerance) {
      ++out.unit_eigenvalues;
      if (unit < 0 || out.eigenvalues(i).real() > out.eigenvalues(unit).real()) unit = i;
    }
  }
  out.reducible = out.unit_eigenvalues > 1;
  double largest = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i != unit) largest = std::max(largest, std::abs(out.eigenvalues(i)));
  }
  out.delta = std::clamp(1.0 - largest, 0.0, 1.0);
  return out;
}

Eigen::MatrixXd acceptance_matrix(std::span<const double> energies, double temperature) {
  const auto dim = static_cast<Eigen::Index>(energies.size());
  Eigen::MatrixXd A(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      A(i, j) = i == j ? 1.0 : metropolis_acceptance(energies[j] - energies[i], temperature);
    }
  }
  return A;
}

Eigen::MatrixXd transition_from_proposal(const Eigen::MatrixXd& Q, std::span<const double> energies,
                                         double temperature) {
  const auto dim = Q.rows();
  if (Q.cols() != dim || static_cast<std::size_t>(dim) != energies.size()) {
    throw std::invalid_argument("proposal matrix and energy list disagree in size");
  }
  Eigen::MatrixXd P(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double moved = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j) continue;
      P(i, j) = Q(i, j) == 0.0 ? 0.0
                               : Q(i, j) * metropolis_acceptance(energies[j] - energies[i],
                                                                 temperature);
      moved += P(i, j);
    }
    P(i, i) = 1.0 - moved;
  }
  return P;
}

double max_asymmetry(const Eigen::MatrixXd& Q) {
  return (Q - Q.transpose()).cwiseAbs().maxCoeff();
}

TransitionMatrix assemble_transition(Eigen::MatrixXd Q, std::span<const double> energies,
                                     double temperature, std::size_t samples) {
  TransitionMatrix out;
  out.n = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(Q.rows())));
  out.A = acceptance_matrix(energies, temperature);
  out.P = transition_from_proposal(Q, energies, temperature);
  out.asymmetry = max_asymmetry(Q);
  out.Q = std::move(Q);
  out.samples = samples;
  auto gap = spectral_gap(out.P);
  out.delta = gap.delta;
  out.reducible = gap.reducible;
  out.eigenvalues = std::move(gap.eigenvalues);
  return out;
}

Eigen::MatrixXd classical_proposal_matrix(std::size_t n, ProposalKind kind) {
  const auto dim = Eigen::Index{1} << n;
  switch (kind) {
    case ProposalKind::uniform:
      return Eigen::MatrixXd::Constant(dim, dim, 1.0 / static_cast<double>(dim));
    case ProposalKind::local_flip: {
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (std::size_t b = 0; b < n; ++b) Q(i, i ^ (Eigen::Index{1} << b)) = 1.0 / n;
      }
      return Q;
    }
    default:
      throw std::invalid_argument("classical proposal matrices exist for uniform and local only");
  }
}

TransitionMatrix build_P_classical(const IsingInstance& instance, ProposalKind kind,
                                   double temperature, const SpectralLimits& limits) {
  check_spectral_cap(instance.size(), limits);
  const auto energies = enumerate_energies(instance);
  return assemble_transition(classical_proposal_matrix(instance.size(), kind), energies,
                             temperature);
}

ProposalEstimate estimate_Q_rowwise(const IsingInstance& instance, const ProposalStrategy& strategy,
                                    const RowwiseOptions& options, const SpectralLimits& limits) {
  const std::size_t n = instance.size();
  check_spectral_cap(n, limits);
  check_rowwise_kind(strategy);
  strategy.validate(n);
  if (options.samples_per_row < 1) throw std::invalid_argument("need at least one draw per row");
  const auto dim = Eigen::Index{1} << n;
  const std::size_t draws = options.samples_per_row;
  const double weight = 1.0 / static_cast<double>(draws);
  const bool grouped = strategy.kind != ProposalKind::qemcmc_full;
  const ReducedHamiltonian full{instance.couplings(), instance.fields()};

  ProposalEstimate out;
  out.samples = draws;
  out.Q = Eigen::MatrixXd::Zero(dim, dim);
  if (options.keep_draws) out.draws.assign(draws, Eigen::MatrixXd::Zero(dim, dim));

  if (options.sampling == RowSampling::paired) {
    for (std::size_t k = 0; k < draws; ++k) {
      Rng rng(derive_seed(options.seed, "draw/" + std::to_string(k)));
      Eigen::MatrixXd draw = Eigen::MatrixXd::Zero(dim, dim);
      if (grouped) {
        const auto group = select_group(n, strategy.group_size, rng);
        const auto hp = sample_hyperparameters(strategy.ranges, rng);
        add_group_draw(instance, strategy, Embedding(n, group), hp, draw, 1.0);
      } else {
        const auto hp = sample_hyperparameters(strategy.ranges, rng);
        draw = register_transitions(full, hp, strategy.emulator);
      }
      out.Q += weight * draw;
      if (options.keep_draws) out.draws[k] = std::move(draw);
    }
    return out;
  }

  for (Eigen::Index i = 0; i < dim; ++i) {
    Rng rng(derive_seed(options.seed, "row/" + std::to_string(i)));
    for (std::size_t k = 0; k < draws; ++k) {
      Eigen::RowVectorXd contribution = Eigen::RowVectorXd::Zero(dim);
      if (grouped) {
        const Embedding embedding(n, select_group(n, strategy.group_size, rng));
        const auto hp = sample_hyperparameters(strategy.ranges, rng);
        const auto full_state = static_cast<BasisIndex>(i);
        const auto reduced = group_hamiltonian(instance, embedding, strategy.kind, full_state);
        const Eigen::VectorXd row = register_row(reduced, hp, embedding.register_index(full_state),
                                                 strategy.emulator);
        const BasisIndex base = full_state & ~embedding.group_mask();
        for (Eigen::Index b = 0; b < row.size(); ++b) {
          contribution(static_cast<Eigen::Index>(base | embedding.group_offsets[b])) += row(b);
        }
      } else {
        const auto hp = sample_hyperparameters(strategy.ranges, rng);
        contribution = register_row(full, hp, static_cast<BasisIndex>(i), strategy.emulator);
      }
      out.Q.row(i) += weight * contribution;
      if (options.keep_draws) out.draws[k].row(i) = contribution;
    }
  }
  return out;
}

ProposalEstimate estimate_Q_bruteforce(const IsingInstance& instance,
                                       const ProposalStrategy& strategy, std::size_t n_s,
                                       std::uint64_t seed, bool keep_transitions,
                                       const SpectralLimits& limits) {
  const std::size_t n = instance.size();
  check_spectral_cap(n, limits);
  strategy.validate(n);
  const auto dim = Eigen::Index{1} << n;
  if (n_s == 0) n_s = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  Rng rng(seed);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(dim, dim);
  ProposalEstimate out;
  out.samples = n_s;
  if (keep_transitions) out.transitions.reserve(n_s);
  for (std::size_t step = 0; step < n_s; ++step) {
    const auto from = static_cast<BasisIndex>(uniform_index(rng, static_cast<std::size_t>(dim)));
    const auto to = propose(strategy, instance, SpinState::from_bits(from, n), rng).to_bits();
    counts(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) += 1.0;
    if (keep_transitions) out.transitions.emplace_back(from, to);
  }
  out.Q = normalise_rows(counts, &out.empty_rows);
  return out;
}

TransitionMatrix build_Q_quantum_rowwise(const IsingInstance& instance,
                                         const ProposalStrategy& strategy, double temperature,
                                         const RowwiseOptions& options,
                                         const SpectralLimits& limits) {
  auto estimate = estimate_Q_rowwise(instance, strategy, options, limits);
  const auto energies = enumerate_energies(instance);
  return assemble_transition(std::move(estimate.Q), energies, temperature, estimate.samples);
}

TransitionMatrix build_Q_quantum_bruteforce(const IsingInstance& instance,
                                            const ProposalStrategy& strategy, double temperature,
                                            std::size_t n_s, std::uint64_t seed,
                                            const SpectralLimits& limits) {
  auto estimate = estimate_Q_bruteforce(instance, strategy, n_s, seed, false, limits);
  const auto energies = enumerate_energies(instance);
  return assemble_transition(std::move(estimate.Q), energies, temperature, estimate.samples);
}

namespace {

// Proposal matrix rebuilt from a bootstrap resample of the stored draws or
// transitions.
Eigen::MatrixXd resampled_proposal(const ProposalEstimate& estimate, Rng& rng) {
  if (!estimate.draws.empty()) {
    const std::size_t draws = estimate.draws.size();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(estimate.Q.rows(), estimate.Q.cols());
    for (std::size_t k = 0; k < draws; ++k) Q += estimate.draws[uniform_index(rng, draws)];
    return Q / static_cast<double>(draws);
  }
  if (!estimate.transitions.empty()) {
    const std::size_t total = estimate.transitions.size();
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(estimate.Q.rows(), estimate.Q.cols());
    for (std::size_t k = 0; k < total; ++k) {
      const auto& [from, to] = estimate.transitions[uniform_index(rng, total)];
      counts(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) += 1.0;
    }
    return normalise_rows(counts, nullptr);
  }
  throw std::invalid_argument("bootstrap needs an estimate built with kept draws or transitions");
}

}  // namespace

BootstrapResult bootstrap_gap(const ProposalEstimate& estimate, std::span<const double> energies,
                              double temperature, std::size_t replicates, std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least two replicates");
  Rng rng(seed);
  BootstrapResult out;
  out.replicates.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto P = transition_from_proposal(resampled_proposal(estimate, rng), energies, temperature);
    out.replicates.push_back(spectral_gap(P).delta);
  }
  double sum = 0.0;
  for (double d : out.replicates) sum += d;
  out.mean = sum / static_cast<double>(replicates);
  double ss = 0.0;
  for (double d : out.replicates) ss += (d - out.mean) * (d - out.mean);
  out.standard_error = std::sqrt(ss / static_cast<double>(replicates - 1));
  return out;
}

double detailed_balance_violation(const Eigen::MatrixXd& P, std::span<const double> mu) {
  const auto dim = P.rows();
  if (static_cast<std::size_t>(dim) != mu.size()) throw std::invalid_argument("size mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      worst = std::max(worst, std::abs(mu[i] * P(i, j) - mu[j] * P(j, i)));
    }
  }
  return worst;
}

double bootstrap_flux_noise_floor(const ProposalEstimate& estimate,
                                  std::span<const double> energies, std::span<const double> mu,
                                  double temperature, std::size_t replicates, std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least two replicates");
  const auto dim = estimate.Q.rows();
  Rng rng(seed);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t r = 0; r < replicates; ++r) {
    Eigen::MatrixXd flux =
        transition_from_proposal(resampled_proposal(estimate, rng), energies, temperature);
    for (Eigen::Index i = 0; i < dim; ++i) flux.row(i) *= mu[i];
    sum += flux;
    sum_sq += flux.cwiseAbs2();
  }
  const double count = static_cast<double>(replicates);
  std::vector<double> errors;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j) continue;
      const double mean = sum(i, j) / count;
      const double var = std::max(0.0, sum_sq(i, j) / count - mean * mean) * count / (count - 1);
      if (var > 0.0) errors.push_back(std::sqrt(var));
    }
  }
  if (errors.empty()) return 0.0;
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  return errors[errors.size() / 2];
}

ThermalisationBounds thermalisation_bounds(double delta, double epsilon, double min_mu) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (!(min_mu > 0.0 && min_mu <= 1.0)) throw std::invalid_argument("min_mu must lie in (0, 1]");
  ThermalisationBounds out;
  out.epsilon = epsilon;
  out.min_mu = min_mu;
  out.lower = (1.0 / delta - 1.0) * std::log(1.0 / (2.0 * epsilon));
  out.upper = (1.0 / delta) * std::log(1.0 / (epsilon * min_mu));
  return out;
}

std::vector<double> worst_case_tv_curve(const Eigen::MatrixXd& P, std::span<const double> mu,
                                        std::size_t max_steps) {
  const auto dim = P.rows();
  if (static_cast<std::size_t>(dim) != mu.size()) throw std::invalid_argument("size mismatch");
  Eigen::RowVectorXd target(dim);
  for (Eigen::Index j = 0; j < dim; ++j) target(j) = mu[j];
  Eigen::MatrixXd dist = Eigen::MatrixXd::Identity(dim, dim);
  std::vector<double> curve;
  curve.reserve(max_steps + 1);
  for (std::size_t t = 0; t <= max_steps; ++t) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      worst = std::max(worst, 0.5 * (dist.row(i) - target).cwiseAbs().sum());
    }
    curve.push_back(worst);
    if (t < max_steps) dist = dist * P;
  }
  return curve;
}

std::size_t mixing_time(const Eigen::MatrixXd& P, std::span<const double> mu, double epsilon,
                        std::size_t max_steps) {
  const auto curve = worst_case_tv_curve(P, mu, max_steps);
  for (std::size_t t = 0; t < curve.size(); ++t) {
    if (curve[t] < epsilon) return t;
  }
  return max_steps + 1;
}

}  // namespace cgq
