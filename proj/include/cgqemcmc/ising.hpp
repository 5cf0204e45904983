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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgqemcmc/common.hpp"

namespace cgq {

enum class ModelClass { fully_connected, one_d_ring };

std::string to_string(ModelClass model_class);
ModelClass parse_model_class(std::string_view text);

// A configuration in {-1,+1}^n.
class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::vector<std::int8_t> spins);

  static SpinState all_up(std::size_t n);
  // Requires n <= 64.
  static SpinState from_bits(BasisIndex bits, std::size_t n);
  // Character i is the bit of spin i ('0' is up, '1' is down).
  static SpinState from_bitstring(std::string_view bits);

  BasisIndex to_bits() const;
  std::string to_bitstring() const;

  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t i) const { return spins_[i]; }
  void set(std::size_t i, int spin);
  void flip(std::size_t i) { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }
  SpinState complement() const;
  std::span<const std::int8_t> spins() const { return spins_; }

  bool operator==(const SpinState&) const = default;

 private:
  std::vector<std::int8_t> spins_;
};

// Couplings J (symmetric, zero diagonal; only j>k entries are independent)
// and fields h of E(s) = -sum_{j>k} J_jk s_j s_k - sum_j h_j s_j.
class IsingInstance {
 public:
  IsingInstance() = default;
  IsingInstance(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
                std::string instance_id = {}, std::uint64_t seed = 0,
                ModelClass model_class = ModelClass::fully_connected);

  std::size_t size() const { return static_cast<std::size_t>(fields_.size()); }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  const Eigen::VectorXd& fields() const { return fields_; }
  double coupling(std::size_t j, std::size_t k) const { return couplings_(j, k); }
  double field(std::size_t j) const { return fields_(j); }

  const std::string& instance_id() const { return instance_id_; }
  std::uint64_t seed() const { return seed_; }
  ModelClass model_class() const { return model_class_; }
  // Label of the generating distribution, written to instance files.
  const std::string& distribution() const { return distribution_; }
  void set_distribution(std::string label) { distribution_ = std::move(label); }

  bool operator==(const IsingInstance& other) const;

 private:
  Eigen::MatrixXd couplings_;
  Eigen::VectorXd fields_;
  std::string instance_id_;
  std::uint64_t seed_ = 0;
  ModelClass model_class_ = ModelClass::fully_connected;
  std::string distribution_ = "unspecified";
};

double energy(const IsingInstance& instance, const SpinState& state);

// Same Hamiltonian evaluated on a packed basis index (n <= 64).
double energy_of_bits(const IsingInstance& instance, BasisIndex bits);

// h_i + sum_{j != i} J_ij s_j.
double local_field(const IsingInstance& instance, const SpinState& state, std::size_t i);

// E(flip_i(s)) - E(s) = 2 s_i (h_i + sum_{j != i} J_ij s_j).
double flip_energy_delta(const IsingInstance& instance, const SpinState& state, std::size_t i);

double magnetisation(const SpinState& state);
double magnetisation_of_bits(BasisIndex bits, std::size_t n);

// min(1, exp(-delta_energy / T)).
double metropolis_acceptance(double delta_energy, double temperature);

// min(1, exp((E(s) - E(s')) / T)), without the partition function.
double acceptance_ratio(const IsingInstance& instance, const SpinState& from,
                        const SpinState& to, double temperature);

std::size_t hamming_distance(const SpinState& a, const SpinState& b);

// Couplings (j>k) and fields drawn i.i.d. from N(0, 1) with mt19937_64(seed).
// The ring model draws only the n cyclic nearest-neighbour couplings.
IsingInstance generate_instance(std::size_t n, ModelClass model_class, std::uint64_t seed);

struct EnergyLevel {
  BasisIndex state = 0;
  double energy = 0.0;
};

struct ExactOptions {
  std::size_t enumeration_cap = 25;
  // Number of lowest levels kept in sorted_levels.
  std::size_t max_levels = 1024;
};

struct ExactDistribution {
  std::size_t n = 0;
  double temperature = 0.0;
  std::vector<double> energies;
  std::vector<double> probabilities;
  double partition_function = 0.0;
  double log_partition_function = 0.0;
  double boltzmann_magnetisation = 0.0;
  double boltzmann_energy = 0.0;
  std::vector<EnergyLevel> sorted_levels;

  double min_probability() const;
  const EnergyLevel& ground_state() const { return sorted_levels.front(); }
};

// E(s) for every basis index, via Gray-code updates restarted from a direct
// evaluation every 4096 states.
std::vector<double> enumerate_energies(const IsingInstance& instance,
                                       std::size_t enumeration_cap = 25);

ExactDistribution exact_distribution(const IsingInstance& instance, double temperature,
                                     const ExactOptions& options = {});

// Lowest `count` levels, ascending by energy then by index.
std::vector<EnergyLevel> lowest_levels(std::span<const double> energies, std::size_t count);

// Plain-text instance files.
void write_instance(std::ostream& out, const IsingInstance& instance);
IsingInstance read_instance(std::istream& in);
void save_instance(const std::filesystem::path& path, const IsingInstance& instance);
IsingInstance load_instance(const std::filesystem::path& path);

}  // namespace cgq
