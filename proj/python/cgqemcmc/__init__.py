# Copyright 2026 The cgqemcmc Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Coarse-grained quantum-enhanced MCMC on Ising models."""

from ._cgqemcmc import (
    ConfigError,
    DegenerateInstanceError,
    IsingInstance,
    ResourceLimitError,
    __version__,
    energy,
    enumerate_energies,
    exact_distribution,
    fit_scaling,
    generate_instance,
    load_instance,
    preset_config,
    quantum_enhancement_factor,
    run_chain,
    run_experiment,
    save_instance,
    spectral_gap,
    thermalisation_bounds,
    transition_matrix,
)

__all__ = [
    "ConfigError",
    "DegenerateInstanceError",
    "IsingInstance",
    "ResourceLimitError",
    "__version__",
    "energy",
    "enumerate_energies",
    "exact_distribution",
    "fit_scaling",
    "generate_instance",
    "load_instance",
    "preset_config",
    "quantum_enhancement_factor",
    "run_chain",
    "run_experiment",
    "save_instance",
    "spectral_gap",
    "thermalisation_bounds",
    "transition_matrix",
]
