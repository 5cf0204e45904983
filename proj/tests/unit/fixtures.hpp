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

// Shared fixtures for the unit tests.

#pragma once

#include <cmath>
#include <vector>

#include "cgqemcmc/ising.hpp"

namespace cgq::testing {

// Hand-written 3-spin instance used by frozen-value tests.
inline IsingInstance three_spin_fixture() {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
  J(1, 0) = J(0, 1) = 0.7;
  J(2, 0) = J(0, 2) = -1.3;
  J(2, 1) = J(1, 2) = 0.4;
  Eigen::VectorXd h(3);
  h << 0.2, -0.5, 0.9;
  return IsingInstance(J, h, "fixture-3");
}

inline IsingInstance zero_instance(std::size_t n) {
  return IsingInstance(Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), "zero");
}

inline IsingInstance fields_only(const std::vector<double>& fields) {
  const auto n = static_cast<Eigen::Index>(fields.size());
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h(i) = fields[static_cast<std::size_t>(i)];
  return IsingInstance(Eigen::MatrixXd::Zero(n, n), h, "fields");
}

// Term-by-term energy with the loops in the opposite order from the library.
inline double energy_oracle(const IsingInstance& inst, BasisIndex bits) {
  const std::size_t n = inst.size();
  double e = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double sk = ((bits >> k) & 1U) ? -1.0 : 1.0;
    for (std::size_t j = n; j-- > k + 1;) {
      const double sj = ((bits >> j) & 1U) ? -1.0 : 1.0;
      e -= inst.coupling(j, k) * sj * sk;
    }
  }
  for (std::size_t j = n; j-- > 0;) e -= inst.field(j) * (((bits >> j) & 1U) ? -1.0 : 1.0);
  return e;
}

// Binomial coefficient as a double.
inline double choose(std::size_t n, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / double(i);
  return out;
}

// |count - N p| <= 5 sqrt(N p (1 - p)).
inline bool within_five_sigma(double count, double trials, double p) {
  return std::abs(count - trials * p) <= 5.0 * std::sqrt(trials * p * (1.0 - p)) + 1e-12;
}

}  // namespace cgq::testing
