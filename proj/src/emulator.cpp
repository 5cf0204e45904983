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

#include "cgqemcmc/emulator.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cgq {

namespace {

using namespace std::complex_literals;

void check_cap(std::size_t qubits, std::size_t cap, const char* what) {
  if (qubits > cap) {
    throw ResourceLimitError(std::string(what) + " is capped at " + std::to_string(cap) +
                             " qubits (requested " + std::to_string(qubits) + ")");
  }
}

void check_hamiltonian(const ProposalHamiltonian& ham) {
  const auto q = ham.fields.size();
  if (q < 1) throw std::invalid_argument("proposal Hamiltonian needs at least one qubit");
  if (ham.couplings.rows() != q || ham.couplings.cols() != q) {
    throw std::invalid_argument("group coupling matrix must be q x q");
  }
  if (!(ham.alpha > 0.0) || !std::isfinite(ham.alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
}

}  // namespace

void HyperparameterRanges::validate() const {
  if (!(gamma_min < gamma_max) || !std::isfinite(gamma_min) || !std::isfinite(gamma_max)) {
    throw std::invalid_argument("gamma range must be a non-empty finite interval");
  }
  if (time_min > time_max || time_min < 0) {
    throw std::invalid_argument("time range must be a non-empty range of non-negative integers");
  }
}

Hyperparameters sample_hyperparameters(const HyperparameterRanges& ranges, Rng& rng) {
  Hyperparameters out;
  do {
    out.gamma = ranges.gamma_min + (ranges.gamma_max - ranges.gamma_min) * uniform01(rng);
  } while (out.gamma <= ranges.gamma_min);
  out.time = static_cast<double>(
      std::uniform_int_distribution<int>(ranges.time_min, ranges.time_max)(rng));
  return out;
}

void ProposalHamiltonian::check_ranges(const HyperparameterRanges& ranges) const {
  if (!(gamma > ranges.gamma_min && gamma < ranges.gamma_max)) {
    throw std::invalid_argument("gamma outside its configured range");
  }
  if (time != std::floor(time) || time < ranges.time_min || time > ranges.time_max) {
    throw std::invalid_argument("time must be an integer inside its configured range");
  }
}

double alpha_normalization(const Eigen::MatrixXd& couplings, const Eigen::VectorXd& fields) {
  const auto q = fields.size();
  double sum = fields.squaredNorm();
  for (Eigen::Index j = 1; j < q; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) sum += couplings(j, k) * couplings(j, k);
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw DegenerateInstanceError("problem Hamiltonian has no nonzero terms to normalise");
  }
  return std::sqrt(static_cast<double>(q)) / std::sqrt(sum);
}

ProposalHamiltonian make_proposal_hamiltonian(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
                                              const Hyperparameters& hyperparameters) {
  ProposalHamiltonian ham;
  try {
    ham.alpha = alpha_normalization(couplings, fields);
  } catch (const DegenerateInstanceError&) {
    ham.alpha = 1.0;
  }
  ham.couplings = std::move(couplings);
  ham.fields = std::move(fields);
  ham.gamma = hyperparameters.gamma;
  ham.time = hyperparameters.time;
  check_hamiltonian(ham);
  return ham;
}

std::vector<double> problem_diagonal(const Eigen::MatrixXd& couplings,
                                     const Eigen::VectorXd& fields) {
  const auto q = static_cast<std::size_t>(fields.size());
  const std::size_t dim = std::size_t{1} << q;
  std::vector<double> diag(dim);
  std::vector<int> s(q);
  for (std::size_t b = 0; b < dim; ++b) {
    for (std::size_t j = 0; j < q; ++j) s[j] = 1 - 2 * static_cast<int>((b >> j) & 1U);
    double e = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      double row = fields(j);
      for (std::size_t k = 0; k < j; ++k) row += couplings(j, k) * s[k];
      e -= s[j] * row;
    }
    diag[b] = e;
  }
  return diag;
}

Eigen::MatrixXd dense_hamiltonian(const ProposalHamiltonian& ham) {
  check_hamiltonian(ham);
  const std::size_t q = ham.qubits();
  const std::size_t dim = std::size_t{1} << q;
  const auto diag = problem_diagonal(ham.couplings, ham.fields);
  const double problem_weight = (1.0 - ham.gamma) * ham.alpha;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    H(b, b) = problem_weight * diag[b];
    for (std::size_t j = 0; j < q; ++j) H(b, b ^ (std::size_t{1} << j)) = ham.gamma;
  }
  return H;
}

ExactPropagator::ExactPropagator(const ProposalHamiltonian& ham, std::size_t dense_cap)
    : time_(ham.time) {
  check_cap(ham.qubits(), dense_cap, "exact evolution");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(ham));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition of the proposal Hamiltonian failed");
  }
  eigenvectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
}

StateVector ExactPropagator::column(BasisIndex input) const {
  const auto dim = eigenvalues_.size();
  if (input >= static_cast<BasisIndex>(dim)) throw std::invalid_argument("input outside register");
  Eigen::VectorXcd weights(dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    weights(m) = eigenvectors_(static_cast<Eigen::Index>(input), m) *
                 std::polar(1.0, -eigenvalues_(m) * time_);
  }
  return eigenvectors_.cast<std::complex<double>>() * weights;
}

Eigen::MatrixXcd ExactPropagator::unitary() const {
  const Eigen::ArrayXd phase = -eigenvalues_.array() * time_;
  const Eigen::MatrixXd scaled_cos = eigenvectors_ * phase.cos().matrix().asDiagonal();
  const Eigen::MatrixXd scaled_sin = eigenvectors_ * phase.sin().matrix().asDiagonal();
  Eigen::MatrixXcd U(eigenvectors_.rows(), eigenvectors_.rows());
  U.real() = scaled_cos * eigenvectors_.transpose();
  U.imag() = scaled_sin * eigenvectors_.transpose();
  return U;
}

Eigen::MatrixXd ExactPropagator::transition_probabilities() const {
  // U is symmetric, so this is also the transpose of |U|^2.
  return unitary().cwiseAbs2();
}

StateVector basis_state(std::size_t qubits, BasisIndex index) {
  const std::size_t dim = std::size_t{1} << qubits;
  if (index >= dim) throw std::invalid_argument("basis index outside register");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return psi;
}

StateVector evolve_exact(const ProposalHamiltonian& ham, BasisIndex input,
                         std::size_t dense_cap) {
  return ExactPropagator(ham, dense_cap).column(input);
}

int default_trotter_slices(double time) {
  return std::max(1, static_cast<int>(std::ceil(10.0 * time - 1e-9)));
}

StateVector evolve_trotter(const ProposalHamiltonian& ham, BasisIndex input, int slices,
                           std::size_t trotter_cap) {
  check_hamiltonian(ham);
  if (slices < 1) throw std::invalid_argument("trotter slices must be positive");
  const std::size_t q = ham.qubits();
  check_cap(q, trotter_cap, "trotter evolution");
  StateVector psi = basis_state(q, input);
  const std::size_t dim = std::size_t{1} << q;
  const double dt = ham.time / slices;
  const double problem_weight = (1.0 - ham.gamma) * ham.alpha;
  const auto diag = problem_diagonal(ham.couplings, ham.fields);
  Eigen::VectorXcd half_phase(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    half_phase(b) = std::polar(1.0, -problem_weight * diag[b] * dt / 2.0);
  }
  const double c = std::cos(ham.gamma * dt);
  const std::complex<double> minus_i_s = -1i * std::sin(ham.gamma * dt);

  for (int slice = 0; slice < slices; ++slice) {
    psi.array() *= half_phase.array();
    for (std::size_t j = 0; j < q; ++j) {
      const std::size_t mask = std::size_t{1} << j;
      for (std::size_t b = 0; b < dim; ++b) {
        if (b & mask) continue;
        const auto a0 = psi(b);
        const auto a1 = psi(b | mask);
        psi(b) = c * a0 + minus_i_s * a1;
        psi(b | mask) = minus_i_s * a0 + c * a1;
      }
    }
    psi.array() *= half_phase.array();
  }
  return psi;
}

StateVector evolve(const ProposalHamiltonian& ham, BasisIndex input,
                   const EmulatorSettings& settings) {
  if (settings.mode == EvolutionMode::trotter) {
    const int slices =
        settings.trotter_slices > 0 ? settings.trotter_slices : default_trotter_slices(ham.time);
    return evolve_trotter(ham, input, slices, settings.trotter_cap);
  }
  return evolve_exact(ham, input, settings.dense_cap);
}

BasisIndex measure_sample(const StateVector& psi, Rng& rng) {
  const double norm = psi.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw std::invalid_argument("statevector is not normalised (norm^2 = " +
                                std::to_string(norm) + ")");
  }
  const double u = uniform01(rng) * norm;
  double cumulative = 0.0;
  const auto dim = psi.size();
  Eigen::Index last_nonzero = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double p = std::norm(psi(i));
    if (p > 0.0) last_nonzero = i;
    cumulative += p;
    if (u < cumulative) return static_cast<BasisIndex>(i);
  }
  return static_cast<BasisIndex>(last_nonzero);
}

std::vector<double> proposal_distribution_row(const ProposalHamiltonian& ham, BasisIndex input,
                                              std::size_t dense_cap) {
  const StateVector psi = evolve_exact(ham, input, dense_cap);
  std::vector<double> row(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) row[static_cast<std::size_t>(i)] = std::norm(psi(i));
  return row;
}

void write_statevector(std::ostream& out, const StateVector& psi) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    out << i << ' ' << psi(i).real() << ' ' << psi(i).imag() << '\n';
  }
  out.precision(precision);
}

}  // namespace cgq
