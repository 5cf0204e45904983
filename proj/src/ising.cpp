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

#include "cgqemcmc/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace cgq {

namespace {

constexpr std::size_t kPairwiseThreshold = 16;
constexpr std::size_t kGrayBlockBits = 12;

inline int spin_of_bit(BasisIndex bits, std::size_t i) {
  return 1 - 2 * static_cast<int>((bits >> i) & 1U);
}

void check_same_size(const IsingInstance& instance, const SpinState& state) {
  if (state.size() != instance.size()) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) +
                                " spins but the instance has " +
                                std::to_string(instance.size()));
  }
}

}  // namespace

std::string to_string(ModelClass model_class) {
  switch (model_class) {
    case ModelClass::fully_connected:
      return "fully_connected";
    case ModelClass::one_d_ring:
      return "one_d_ring";
  }
  return "unknown";
}

ModelClass parse_model_class(std::string_view text) {
  if (text == "fully_connected") return ModelClass::fully_connected;
  if (text == "one_d_ring") return ModelClass::one_d_ring;
  throw std::invalid_argument("unknown model class '" + std::string(text) + "'");
}

SpinState::SpinState(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin values must be -1 or +1");
  }
}

SpinState SpinState::all_up(std::size_t n) {
  return SpinState(std::vector<std::int8_t>(n, 1));
}

SpinState SpinState::from_bits(BasisIndex bits, std::size_t n) {
  if (n > 64) throw std::invalid_argument("packed states hold at most 64 spins");
  std::vector<std::int8_t> spins(n);
  for (std::size_t i = 0; i < n; ++i) spins[i] = static_cast<std::int8_t>(spin_of_bit(bits, i));
  return SpinState(std::move(spins));
}

SpinState SpinState::from_bitstring(std::string_view bits) {
  std::vector<std::int8_t> spins(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '0') {
      spins[i] = 1;
    } else if (bits[i] == '1') {
      spins[i] = -1;
    } else {
      throw std::invalid_argument("bitstring may only contain '0' and '1'");
    }
  }
  return SpinState(std::move(spins));
}

BasisIndex SpinState::to_bits() const {
  if (spins_.size() > 64) throw std::invalid_argument("packed states hold at most 64 spins");
  BasisIndex bits = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] < 0) bits |= BasisIndex{1} << i;
  }
  return bits;
}

std::string SpinState::to_bitstring() const {
  std::string out(spins_.size(), '0');
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] < 0) out[i] = '1';
  }
  return out;
}

void SpinState::set(std::size_t i, int spin) {
  if (spin != 1 && spin != -1) throw std::invalid_argument("spin values must be -1 or +1");
  spins_.at(i) = static_cast<std::int8_t>(spin);
}

SpinState SpinState::complement() const {
  SpinState out = *this;
  for (auto& s : out.spins_) s = static_cast<std::int8_t>(-s);
  return out;
}

IsingInstance::IsingInstance(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
                             std::string instance_id, std::uint64_t seed,
                             ModelClass model_class)
    : couplings_(std::move(couplings)),
      fields_(std::move(fields)),
      instance_id_(std::move(instance_id)),
      seed_(seed),
      model_class_(model_class) {
  const auto n = fields_.size();
  if (n < 2) throw std::invalid_argument("an Ising instance needs at least 2 spins");
  if (couplings_.rows() != n || couplings_.cols() != n) {
    throw std::invalid_argument("coupling matrix must be n x n");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (couplings_(j, j) != 0.0) throw std::invalid_argument("coupling diagonal must be zero");
    for (Eigen::Index k = 0; k < j; ++k) {
      if (couplings_(j, k) != couplings_(k, j)) {
        throw std::invalid_argument("coupling matrix must be symmetric");
      }
    }
  }
  if (!couplings_.allFinite() || !fields_.allFinite()) {
    throw std::invalid_argument("couplings and fields must be finite");
  }
}

bool IsingInstance::operator==(const IsingInstance& other) const {
  return couplings_ == other.couplings_ && fields_ == other.fields_ &&
         instance_id_ == other.instance_id_ && seed_ == other.seed_ &&
         model_class_ == other.model_class_ && distribution_ == other.distribution_;
}

double energy(const IsingInstance& instance, const SpinState& state) {
  check_same_size(instance, state);
  const std::size_t n = instance.size();
  const auto& J = instance.couplings();
  const auto& h = instance.fields();
  if (n <= kPairwiseThreshold) {
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double row = h(j);
      for (std::size_t k = 0; k < j; ++k) row += J(j, k) * state[k];
      e -= state[j] * row;
    }
    return e;
  }
  std::vector<double> rows(n);
  for (std::size_t j = 0; j < n; ++j) {
    double row = h(j);
    for (std::size_t k = 0; k < j; ++k) row += J(j, k) * state[k];
    rows[j] = -state[j] * row;
  }
  return pairwise_sum(rows);
}

double energy_of_bits(const IsingInstance& instance, BasisIndex bits) {
  const std::size_t n = instance.size();
  const auto& J = instance.couplings();
  const auto& h = instance.fields();
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = h(j);
    for (std::size_t k = 0; k < j; ++k) row += J(j, k) * spin_of_bit(bits, k);
    e -= spin_of_bit(bits, j) * row;
  }
  return e;
}

double local_field(const IsingInstance& instance, const SpinState& state, std::size_t i) {
  check_same_size(instance, state);
  double f = instance.field(i);
  for (std::size_t j = 0; j < instance.size(); ++j) {
    if (j != i) f += instance.coupling(i, j) * state[j];
  }
  return f;
}

double flip_energy_delta(const IsingInstance& instance, const SpinState& state, std::size_t i) {
  return 2.0 * state[i] * local_field(instance, state, i);
}

double magnetisation(const SpinState& state) {
  if (state.size() == 0) return 0.0;
  long total = 0;
  for (auto s : state.spins()) total += s;
  return static_cast<double>(total) / static_cast<double>(state.size());
}

double magnetisation_of_bits(BasisIndex bits, std::size_t n) {
  const auto down = static_cast<double>(std::popcount(bits));
  return (static_cast<double>(n) - 2.0 * down) / static_cast<double>(n);
}

double metropolis_acceptance(double delta_energy, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (delta_energy <= 0.0) return 1.0;
  return std::exp(-delta_energy / temperature);
}

double acceptance_ratio(const IsingInstance& instance, const SpinState& from,
                        const SpinState& to, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  return metropolis_acceptance(energy(instance, to) - energy(instance, from), temperature);
}

std::size_t hamming_distance(const SpinState& a, const SpinState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming distance needs equal lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

IsingInstance generate_instance(std::size_t n, ModelClass model_class, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("an Ising instance needs at least 2 spins");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h(n);
  switch (model_class) {
    case ModelClass::fully_connected:
      for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
          J(j, k) = J(k, j) = normal(rng);
        }
      }
      break;
    case ModelClass::one_d_ring:
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = (j + 1) % n;
        const double value = normal(rng);
        if (J(j, k) == 0.0) J(j, k) = J(k, j) = value;
      }
      break;
  }
  for (std::size_t j = 0; j < n; ++j) h(j) = normal(rng);
  std::string id = to_string(model_class) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
  IsingInstance instance(std::move(J), std::move(h), std::move(id), seed, model_class);
  instance.set_distribution("iid_standard_normal");
  return instance;
}

double ExactDistribution::min_probability() const {
  return *std::min_element(probabilities.begin(), probabilities.end());
}

std::vector<double> enumerate_energies(const IsingInstance& instance,
                                       std::size_t enumeration_cap) {
  const std::size_t n = instance.size();
  if (n > enumeration_cap || n > 62) {
    throw ResourceLimitError("exact enumeration is capped at " +
                             std::to_string(enumeration_cap) + " spins (instance has " +
                             std::to_string(n) + ")");
  }
  const BasisIndex total = BasisIndex{1} << n;
  const std::size_t low = std::min(n, kGrayBlockBits);
  const BasisIndex block_size = BasisIndex{1} << low;
  const auto& J = instance.couplings();
  std::vector<double> energies(total);
  std::vector<int> spins(low);
  std::vector<double> fields(low);

  for (BasisIndex base = 0; base < total; base += block_size) {
    double e = energy_of_bits(instance, base);
    for (std::size_t i = 0; i < low; ++i) {
      spins[i] = spin_of_bit(base, i);
      double f = instance.field(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) f += J(i, j) * spin_of_bit(base, j);
      }
      fields[i] = f;
    }
    energies[base] = e;
    for (BasisIndex step = 1; step < block_size; ++step) {
      const auto flip = static_cast<std::size_t>(std::countr_zero(step));
      e += 2.0 * spins[flip] * fields[flip];
      const double change = -2.0 * spins[flip];
      for (std::size_t i = 0; i < low; ++i) {
        if (i != flip) fields[i] += J(i, flip) * change;
      }
      spins[flip] = -spins[flip];
      energies[base | (step ^ (step >> 1))] = e;
    }
  }
  return energies;
}

std::vector<EnergyLevel> lowest_levels(std::span<const double> energies, std::size_t count) {
  auto worse = [](const EnergyLevel& a, const EnergyLevel& b) {
    return a.energy < b.energy || (a.energy == b.energy && a.state < b.state);
  };
  // Max-heap on (energy, state): top is the worst level kept so far.
  std::priority_queue<EnergyLevel, std::vector<EnergyLevel>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    EnergyLevel level{static_cast<BasisIndex>(i), energies[i]};
    if (heap.size() < count) {
      heap.push(level);
    } else if (count > 0 && worse(level, heap.top())) {
      heap.pop();
      heap.push(level);
    }
  }
  std::vector<EnergyLevel> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ExactDistribution exact_distribution(const IsingInstance& instance, double temperature,
                                     const ExactOptions& options) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  ExactDistribution out;
  out.n = instance.size();
  out.temperature = temperature;
  out.energies = enumerate_energies(instance, options.enumeration_cap);

  const double e_min = *std::min_element(out.energies.begin(), out.energies.end());
  out.probabilities.resize(out.energies.size());
  for (std::size_t i = 0; i < out.energies.size(); ++i) {
    out.probabilities[i] = std::exp(-(out.energies[i] - e_min) / temperature);
  }
  const double shifted_z = compensated_sum(out.probabilities);
  out.log_partition_function = -e_min / temperature + std::log(shifted_z);
  out.partition_function = std::exp(out.log_partition_function);

  std::vector<double> weighted_m(out.energies.size());
  std::vector<double> weighted_e(out.energies.size());
  for (std::size_t i = 0; i < out.energies.size(); ++i) {
    const double p = out.probabilities[i] / shifted_z;
    out.probabilities[i] = p;
    weighted_m[i] = p * magnetisation_of_bits(i, out.n);
    weighted_e[i] = p * out.energies[i];
  }
  out.boltzmann_magnetisation = compensated_sum(weighted_m);
  out.boltzmann_energy = compensated_sum(weighted_e);
  out.sorted_levels = lowest_levels(out.energies, options.max_levels);
  return out;
}

}  // namespace cgq
