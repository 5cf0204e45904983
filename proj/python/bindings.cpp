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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "cgqemcmc/experiment.hpp"
#include "cgqemcmc/mcmc.hpp"
#include "cgqemcmc/spectral.hpp"

namespace py = pybind11;
using namespace cgq;

namespace {

ProposalStrategy strategy_from(const std::string& spec, std::size_t n) {
  const auto parsed = StrategySpec::parse(spec);
  ProposalStrategy strategy;
  strategy.kind = parsed.kind;
  strategy.group_size = parsed.rounded_group_size(n);
  return strategy;
}

py::dict transition_dict(const TransitionMatrix& tm) {
  py::dict out;
  out["Q"] = tm.Q;
  out["P"] = tm.P;
  out["delta"] = tm.delta;
  out["reducible"] = tm.reducible;
  out["asymmetry"] = tm.asymmetry;
  out["samples"] = tm.samples;
  return out;
}

}  // namespace

PYBIND11_MODULE(_cgqemcmc, m) {
  m.doc() = "Coarse-grained quantum-enhanced Markov chain Monte Carlo";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ResourceLimitError>(m, "ResourceLimitError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DegenerateInstanceError>(m, "DegenerateInstanceError");

  py::class_<IsingInstance>(m, "IsingInstance")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd, std::string, std::uint64_t>(),
           py::arg("couplings"), py::arg("fields"), py::arg("instance_id") = "",
           py::arg("seed") = 0)
      .def_property_readonly("n", &IsingInstance::size)
      .def_property_readonly("couplings", &IsingInstance::couplings)
      .def_property_readonly("fields", &IsingInstance::fields)
      .def_property_readonly("instance_id", &IsingInstance::instance_id)
      .def_property_readonly("seed", &IsingInstance::seed)
      .def("__eq__", &IsingInstance::operator==);

  m.def(
      "generate_instance",
      [](std::size_t n, const std::string& model_class, std::uint64_t seed) {
        return generate_instance(n, parse_model_class(model_class), seed);
      },
      py::arg("n"), py::arg("model_class") = "fully_connected", py::arg("seed") = 0);
  m.def("load_instance", [](const std::string& path) { return load_instance(path); });
  m.def("save_instance",
        [](const std::string& path, const IsingInstance& inst) { save_instance(path, inst); });

  m.def(
      "energy",
      [](const IsingInstance& inst, const std::string& bits) {
        return energy(inst, SpinState::from_bitstring(bits));
      },
      py::arg("instance"), py::arg("bitstring"),
      "Energy of a state written as a bitstring ('0' = up), spin 0 first.");
  m.def("enumerate_energies",
        [](const IsingInstance& inst) { return enumerate_energies(inst); });

  m.def(
      "exact_distribution",
      [](const IsingInstance& inst, double temperature) {
        const auto exact = exact_distribution(inst, temperature);
        py::dict out;
        out["probabilities"] = exact.probabilities;
        out["energies"] = exact.energies;
        out["log_partition_function"] = exact.log_partition_function;
        out["boltzmann_energy"] = exact.boltzmann_energy;
        out["boltzmann_magnetisation"] = exact.boltzmann_magnetisation;
        out["ground_energy"] = exact.ground_state().energy;
        out["ground_state"] = exact.ground_state().state;
        return out;
      },
      py::arg("instance"), py::arg("temperature"));

  m.def(
      "run_chain",
      [](const IsingInstance& inst, const std::string& strategy, double temperature,
         std::size_t steps, std::uint64_t seed) {
        ChainOptions options;
        options.state_cap = 0;
        options.snapshot_stride = steps;
        const auto trace =
            run_chain(inst, strategy_from(strategy, inst.size()), temperature, steps, seed, options);
        std::vector<double> e, mag, de;
        std::vector<std::uint32_t> hamming;
        std::vector<bool> accepted;
        for (const auto& r : trace.steps()) {
          e.push_back(r.energy);
          mag.push_back(r.magnetisation);
          de.push_back(r.proposed_energy_delta);
          hamming.push_back(r.proposed_hamming);
          accepted.push_back(r.accepted);
        }
        py::dict out;
        out["energy"] = e;
        out["magnetisation"] = mag;
        out["proposed_dE"] = de;
        out["proposed_hamming"] = hamming;
        out["accepted"] = accepted;
        return out;
      },
      py::arg("instance"), py::arg("strategy"), py::arg("temperature"), py::arg("steps"),
      py::arg("seed") = 0,
      "Run one chain; strategy is e.g. 'local', 'qemcmc' or 'cg_multiple_groups:3'.");

  m.def("spectral_gap", [](const Eigen::MatrixXd& P) { return spectral_gap(P).delta; });
  m.def(
      "transition_matrix",
      [](const IsingInstance& inst, const std::string& strategy, double temperature,
         std::size_t samples, std::uint64_t seed) {
        const auto s = strategy_from(strategy, inst.size());
        if (!is_quantum(s.kind)) return transition_dict(build_P_classical(inst, s.kind, temperature));
        if (s.kind == ProposalKind::cg_multiple_groups) {
          return transition_dict(build_Q_quantum_bruteforce(inst, s, temperature, samples, seed));
        }
        RowwiseOptions options;
        options.seed = seed;
        if (samples) options.samples_per_row = samples;
        return transition_dict(build_Q_quantum_rowwise(inst, s, temperature, options));
      },
      py::arg("instance"), py::arg("strategy"), py::arg("temperature"), py::arg("samples") = 0,
      py::arg("seed") = 0,
      "Q, P and spectral gap. samples: draws per row, or brute-force steps for "
      "cg_multiple_groups (0 = default).");

  m.def(
      "thermalisation_bounds",
      [](double delta, double epsilon, double min_mu) {
        const auto b = thermalisation_bounds(delta, epsilon, min_mu);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("delta"), py::arg("epsilon"), py::arg("min_mu"));

  m.def(
      "fit_scaling",
      [](const std::vector<double>& n, const std::vector<double>& delta,
         const std::vector<double>& delta_err) {
        if (n.size() != delta.size() || n.size() != delta_err.size()) {
          throw std::invalid_argument("n, delta and delta_err must have equal length");
        }
        std::vector<ScalingPoint> points;
        for (std::size_t i = 0; i < n.size(); ++i) points.push_back({n[i], delta[i], delta_err[i]});
        const auto fit = fit_scaling(points);
        py::dict out;
        out["a"] = fit.a;
        out["k"] = fit.k;
        out["k_err"] = fit.k_err;
        return out;
      },
      py::arg("n"), py::arg("delta"), py::arg("delta_err"));
  m.def("quantum_enhancement_factor", &quantum_enhancement_factor, py::arg("k_quantum"),
        py::arg("k_classical_best"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto config = config_from_json(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        return run_experiment(config);
      },
      py::arg("config_json"), "Run an experiment from a JSON config; returns failed cells.");
  m.def(
      "preset_config",
      [](const std::string& name, const std::string& scale) {
        return to_json(preset_config(name, scale)).dump();
      },
      py::arg("name"), py::arg("scale") = "desk");
}
