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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cgq {

#ifdef CGQ_VERSION
inline constexpr std::string_view kVersion = CGQ_VERSION;
#else
inline constexpr std::string_view kVersion = "0.0.0";
#endif

// Index of a computational basis state. Bit i holds b_i for spin i, with
// s_i = 1 - 2 b_i (so bit 0 is spin up).
using BasisIndex = std::uint64_t;

using Rng = std::mt19937_64;

// Raised when a problem exceeds an enumeration or emulation cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a Hamiltonian has no terms to normalise against.
class DegenerateInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed experiment configurations and instance files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t fnv1a64(std::string_view bytes);

// Child seed for a task identified by a path such as "spectral/inst3/local".
// Hash is splitmix64(master ^ splitmix64(fnv1a64(path))), so adding tasks
// never perturbs the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t master, std::string_view task_path);

inline double uniform01(Rng& rng) {
  // 53 random mantissa bits, in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(Rng& rng, std::size_t count) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

// Recursive pairwise sum; error grows as O(log n) rather than O(n).
double pairwise_sum(std::span<const double> values);

// Runs body(i) for i in [0, count) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace cgq
