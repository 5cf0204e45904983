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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cgqemcmc/mcmc.hpp"
#include "fixtures.hpp"

using namespace cgq;
using cgq::testing::choose;
using cgq::testing::within_five_sigma;

namespace {

double total_variation(const std::vector<double>& counts, const std::vector<double>& probs,
                       double total) {
  double tv = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) tv += std::abs(counts[i] / total - probs[i]);
  return tv / 2.0;
}

std::vector<double> visit_counts(const ChainTrace& trace) {
  std::vector<double> counts(std::size_t{1} << trace.spins(), 0.0);
  for (std::size_t k = 0; k < trace.size(); ++k) counts[trace.state_bits(k)] += 1.0;
  return counts;
}

}  // namespace

TEST_CASE("chain argument checks") {
  const auto inst = generate_instance(4, ModelClass::fully_connected, 1);
  CHECK_THROWS_AS(run_chain(inst, ProposalStrategy::local(), 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(inst, ProposalStrategy::local(), -2.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(inst, ProposalStrategy::local(), 1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(inst, ProposalStrategy::naive_group(5), 1.0, 10, 1),
                  std::invalid_argument);
  ChainOptions wrong;
  wrong.initial = SpinState::all_up(3);
  CHECK_THROWS_AS(run_chain(inst, ProposalStrategy::local(), 1.0, 10, 1, wrong),
                  std::invalid_argument);
}

TEST_CASE("infinite temperature accepts everything") {
  const auto inst = generate_instance(6, ModelClass::fully_connected, 2);
  const auto trace = run_chain(inst, ProposalStrategy::uniform(), 1e9, 5000, 3);
  CHECK(summarize(trace).acceptance_rate == 1.0);
}

TEST_CASE("null proposals are always accepted") {
  // On a decoupled instance at gamma t = 0 mod pi the quantum proposal
  // returns the input, so every step proposes the current state.
  const auto inst = cgq::testing::zero_instance(3);
  auto strategy = ProposalStrategy::qemcmc();
  strategy.ranges.time_min = strategy.ranges.time_max = 0;
  const auto trace = run_chain(inst, strategy, 0.01, 200, 4);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    CHECK(trace[k].proposed_hamming == 0);
    CHECK(trace[k].accepted);
    CHECK(trace.state(k) == trace.initial_state);
  }
}

TEST_CASE("local chain converges to the Boltzmann distribution") {
  const auto inst = generate_instance(4, ModelClass::fully_connected, 5);
  const auto exact = exact_distribution(inst, 2.0);
  const auto trace = run_chain(inst, ProposalStrategy::local(), 2.0, 1'000'000, 6);
  CHECK(total_variation(visit_counts(trace), exact.probabilities, 1e6) < 0.02);
  const auto summary = summarize(trace, exact);
  CHECK(std::abs(summary.cumulative_magnetisation.back() - exact.boltzmann_magnetisation) < 0.02);
  CHECK(std::abs(summary.cumulative_energy.back() - exact.boltzmann_energy) < 0.05);
  REQUIRE(summary.found_ground_state_at.has_value());
  CHECK(trace[*summary.found_ground_state_at].energy ==
        doctest::Approx(exact.ground_state().energy));
}

TEST_CASE("every strategy samples the Boltzmann distribution on a small instance") {
  const auto inst = generate_instance(5, ModelClass::fully_connected, 7);
  const auto exact = exact_distribution(inst, 1.5);
  const std::vector<ProposalStrategy> strategies = {
      ProposalStrategy::uniform(), ProposalStrategy::qemcmc(), ProposalStrategy::naive_group(2),
      ProposalStrategy::improved_group(3), ProposalStrategy::multiple_groups(2)};
  for (const auto& strategy : strategies) {
    const auto trace = run_chain(inst, strategy, 1.5, 100'000, 8);
    INFO(strategy.label());
    CHECK(total_variation(visit_counts(trace), exact.probabilities, 1e5) < 0.05);
  }
}

TEST_CASE("trace invariants and audit replay") {
  const auto inst = generate_instance(6, ModelClass::fully_connected, 9);
  const double t = 0.7;
  const auto trace = run_chain(inst, ProposalStrategy::improved_group(3), t, 5000, 10);
  SpinState previous = trace.initial_state;
  double previous_energy = energy(inst, previous);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& r = trace[k];
    const auto s = trace.state(k);
    CHECK(r.energy == doctest::Approx(energy(inst, s)).epsilon(1e-10));
    CHECK(r.magnetisation == magnetisation(s));
    if (!r.accepted) {
      CHECK(s == previous);
    } else {
      CHECK(r.energy == doctest::Approx(previous_energy + r.proposed_energy_delta).epsilon(1e-10));
      CHECK(hamming_distance(s, previous) == r.proposed_hamming);
      if (r.proposed_energy_delta > 0.0) {
        CHECK(r.uniform_draw <= std::exp(-r.proposed_energy_delta / t));
      }
    }
    if (r.proposed_energy_delta <= 0.0) CHECK(r.accepted);
    previous = s;
    previous_energy = r.energy;
  }
}

TEST_CASE("chains are deterministic in the seed") {
  const auto inst = generate_instance(7, ModelClass::fully_connected, 11);
  for (const auto& strategy : {ProposalStrategy::local(), ProposalStrategy::multiple_groups(3)}) {
    const auto a = run_chain(inst, strategy, 1.0, 500, 12);
    const auto b = run_chain(inst, strategy, 1.0, 500, 12);
    std::ostringstream sa, sb;
    write_trace_csv(sa, a);
    write_trace_csv(sb, b);
    CHECK(sa.str() == sb.str());
    const auto c = run_chain(inst, strategy, 1.0, 500, 13);
    std::ostringstream sc;
    write_trace_csv(sc, c);
    CHECK(sa.str() != sc.str());
  }
}

TEST_CASE("pinned initial state") {
  const auto inst = generate_instance(5, ModelClass::fully_connected, 14);
  ChainOptions options;
  options.initial = SpinState::from_bitstring("10101");
  const auto trace = run_chain(inst, ProposalStrategy::local(), 1.0, 10, 15, options);
  CHECK(trace.initial_state == *options.initial);
  CHECK(hamming_distance(trace.state(0), *options.initial) <= 1);
}

TEST_CASE("summaries of constructed traces") {
  ChainTrace up(3, 100, 1);
  const auto all_up = SpinState::all_up(3);
  for (int k = 0; k < 10; ++k) up.append({0.0, 1.0, 0.0, 0.0, 0, false}, all_up);
  for (double m : summarize(up).cumulative_magnetisation) CHECK(m == 1.0);

  ChainTrace alternating(3, 100, 1);
  for (int k = 0; k < 100; ++k) {
    const double m = k % 2 ? -1.0 : 1.0;
    alternating.append({-1.0 * k, m, 0.0, 0.0, 3, true}, k % 2 ? all_up.complement() : all_up);
  }
  const auto summary = summarize(alternating, -50.0);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(summary.cumulative_magnetisation[k] == doctest::Approx(k % 2 ? 0.0 : 1.0 / (k + 1)));
  }
  CHECK(summary.cumulative_energy[3] == doctest::Approx(-1.5));
  REQUIRE(summary.found_ground_state_at.has_value());
  CHECK(*summary.found_ground_state_at == 50);
  CHECK(summary.acceptance_rate == 1.0);
  CHECK_FALSE(summarize(alternating).found_ground_state_at.has_value());
}

TEST_CASE("trace storage cap keeps strided snapshots") {
  const auto inst = generate_instance(5, ModelClass::fully_connected, 16);
  ChainOptions options;
  options.state_cap = 10;
  options.snapshot_stride = 7;
  const auto trace = run_chain(inst, ProposalStrategy::local(), 1.0, 100, 17, options);
  const auto full = run_chain(inst, ProposalStrategy::local(), 1.0, 100, 17);
  CHECK(trace.size() == 100);
  for (std::size_t k = 0; k < 100; ++k) {
    const bool stored = k < 10 || (k - 10) % 7 == 0;
    CHECK(trace.has_state(k) == stored);
    if (stored) CHECK(trace.state(k) == full.state(k));
    CHECK(trace[k].energy == full[k].energy);
  }
  CHECK_THROWS_AS(trace.state(11), std::out_of_range);

  const auto wide = generate_instance(70, ModelClass::fully_connected, 18);
  const auto wide_trace = run_chain(wide, ProposalStrategy::local(), 1.0, 20, 19);
  CHECK(wide_trace.state(19).size() == 70);
  CHECK(wide_trace[19].energy == doctest::Approx(energy(wide, wide_trace.state(19))));
}

TEST_CASE("proposal statistics") {
  const auto inst = generate_instance(9, ModelClass::fully_connected, 20);
  const auto local = proposal_statistics(run_chain(inst, ProposalStrategy::local(), 1.0, 2000, 21));
  CHECK(local.hamming_counts[1] == 2000);
  CHECK(local.hamming_cdf[0] == 0.0);
  CHECK(local.hamming_cdf[1] == 1.0);

  const std::size_t draws = 100'000;
  const auto uniform =
      proposal_statistics(run_chain(inst, ProposalStrategy::uniform(), 1.0, draws, 22));
  for (std::size_t d = 0; d <= 9; ++d) {
    CHECK(within_five_sigma(uniform.hamming_counts[d], draws, choose(9, d) / 512.0));
  }
  CHECK(uniform.hamming_cdf.back() == doctest::Approx(1.0));

  const auto group =
      proposal_statistics(run_chain(inst, ProposalStrategy::naive_group(3), 1.0, 3000, 23));
  for (std::size_t d = 4; d <= 9; ++d) CHECK(group.hamming_counts[d] == 0);

  CHECK(std::is_sorted(group.sorted_abs_energy_delta.begin(), group.sorted_abs_energy_delta.end()));
  CHECK(group.energy_cdf(-1.0) == 0.0);
  CHECK(group.energy_cdf(1e300) == 1.0);
  const double median = group.sorted_abs_energy_delta[group.proposals() / 2];
  CHECK(group.energy_cdf(median) >= 0.5);
}

TEST_CASE("trace CSV layout") {
  const auto inst = generate_instance(3, ModelClass::fully_connected, 24);
  const auto trace = run_chain(inst, ProposalStrategy::local(), 1.0, 3, 25);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,state,energy,magnetisation,proposed_hamming,proposed_dE,accepted");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind(std::to_string(rows) + "," + trace.state(rows - 1).to_bitstring() + ",", 0) ==
          0);
  }
  CHECK(rows == 3);
}
