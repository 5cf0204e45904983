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

// Instance file layout (one record per line, '#' starts a comment):
//
//   cgqemcmc-instance 1
//   n 4
//   model_class fully_connected
//   seed 7
//   instance_id fully_connected-n4-s7
//   distribution iid_standard_normal
//   couplings 6
//   1 0 -0.61314270400193541
//   ...                       (j k value, j > k)
//   fields 4
//   0 0.93440247059939231
//   ...                       (j value)

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cgqemcmc/ising.hpp"

namespace cgq {

namespace {

constexpr std::string_view kMagic = "cgqemcmc-instance";

std::string next_record(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw ConfigError("instance file ended unexpectedly");
}

template <typename T>
T expect_keyed(std::istream& in, std::string_view key) {
  std::istringstream record(next_record(in));
  std::string found;
  T value{};
  if (!(record >> found) || found != key || !(record >> value)) {
    throw ConfigError("instance file: expected '" + std::string(key) + " <value>'");
  }
  return value;
}

}  // namespace

void write_instance(std::ostream& out, const IsingInstance& instance) {
  const std::size_t n = instance.size();
  out << kMagic << " 1\n";
  out << "n " << n << '\n';
  out << "model_class " << to_string(instance.model_class()) << '\n';
  out << "seed " << instance.seed() << '\n';
  out << "instance_id " << (instance.instance_id().empty() ? "-" : instance.instance_id()) << '\n';
  out << "distribution " << instance.distribution() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "couplings " << n * (n - 1) / 2 << '\n';
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      out << j << ' ' << k << ' ' << instance.coupling(j, k) << '\n';
    }
  }
  out << "fields " << n << '\n';
  for (std::size_t j = 0; j < n; ++j) out << j << ' ' << instance.field(j) << '\n';
}

IsingInstance read_instance(std::istream& in) {
  {
    std::istringstream header(next_record(in));
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != kMagic || version != 1) {
      throw ConfigError("not a cgqemcmc instance file (version 1)");
    }
  }
  const auto n = expect_keyed<std::size_t>(in, "n");
  if (n < 2 || n > 4096) throw ConfigError("instance file: spin count out of range");
  const auto model = expect_keyed<std::string>(in, "model_class");
  const auto seed = expect_keyed<std::uint64_t>(in, "seed");
  auto id = expect_keyed<std::string>(in, "instance_id");
  if (id == "-") id.clear();
  const auto distribution = expect_keyed<std::string>(in, "distribution");

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const auto coupling_count = expect_keyed<std::size_t>(in, "couplings");
  for (std::size_t c = 0; c < coupling_count; ++c) {
    std::istringstream record(next_record(in));
    std::size_t j = 0, k = 0;
    double value = 0.0;
    if (!(record >> j >> k >> value) || j >= n || k >= j) {
      throw ConfigError("instance file: malformed coupling triple (need j > k)");
    }
    J(j, k) = J(k, j) = value;
  }
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  const auto field_count = expect_keyed<std::size_t>(in, "fields");
  if (field_count != n) throw ConfigError("instance file: field count must equal n");
  for (std::size_t c = 0; c < field_count; ++c) {
    std::istringstream record(next_record(in));
    std::size_t j = 0;
    double value = 0.0;
    if (!(record >> j >> value) || j >= n) throw ConfigError("instance file: malformed field");
    h(j) = value;
  }
  ModelClass model_class;
  try {
    model_class = parse_model_class(model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("instance file: ") + e.what());
  }
  IsingInstance instance(std::move(J), std::move(h), std::move(id), seed, model_class);
  instance.set_distribution(distribution);
  return instance;
}

void save_instance(const std::filesystem::path& path, const IsingInstance& instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_instance(out, instance);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

IsingInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open instance file '" + path.string() + "'");
  return read_instance(in);
}

}  // namespace cgq
