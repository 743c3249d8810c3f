// Copyright 2026 The Shardsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "shardsim/run_io.h"
#include "shardsim/simulation.h"

namespace shardsim {
namespace {

ScenarioConfig Small(Policy policy) {
  ScenarioConfig c;
  c.name = "small";
  c.topology = TopologyKind::kRing;
  c.num_agents = 8;
  c.num_shards = 4;
  c.slots_per_shard = 200;
  c.blocks_target = 3;
  c.policy = policy;
  c.balance_mode = BalanceMode::kUniform;
  c.seed = 5;
  return c;
}

std::string Csv(const RunResult& r) {
  std::ostringstream out;
  WriteTraceCsv(out, r);
  return out.str();
}

TEST_CASE("round shuffle") {
  Rng rng(1);
  auto first = GenerateRoundShuffle(38, rng);
  auto sorted = first;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t e = 0; e < 38; ++e) CHECK(sorted[e] == e);

  Rng again(1);
  CHECK(GenerateRoundShuffle(38, again) == first);

  int differing = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r(seed);
    if (GenerateRoundShuffle(38, r) != GenerateRoundShuffle(38, r)) ++differing;
  }
  CHECK(differing == 50);
}

TEST_CASE("uniform edge draws") {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) CHECK(GenerateUniformEdge(1, rng) == 0);
  CHECK_THROWS_AS(GenerateUniformEdge(0, rng), ShardsimError);

  constexpr int kEdges = 20;
  constexpr int kDraws = 100000;
  std::vector<int> counts(kEdges, 0);
  for (int k = 0; k < kDraws; ++k) ++counts[GenerateUniformEdge(kEdges, rng)];
  const double expected = static_cast<double>(kDraws) / kEdges;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 19 degrees of freedom: mean 19, sd ~6.2; allow 3 sd.
  CHECK(chi2 < 19 + 3 * std::sqrt(2.0 * 19));

  Rng a(3), b(3);
  for (int k = 0; k < 100; ++k) {
    CHECK(GenerateUniformEdge(kEdges, a) == GenerateUniformEdge(kEdges, b));
  }
}

TEST_CASE("random policy cardinality") {
  ScenarioConfig c = Small(Policy::kRandom);
  c.slots_per_shard = 5000;
  c.blocks_target = 1;
  const RunResult r = RunScenario(c);
  // Request and send shard uniform and independent: 2 - 1/4.
  CHECK(r.block_summaries[0].mean_cardinality ==
        doctest::Approx(1.75).epsilon(0.02));
}

TEST_CASE("matched estimates give single-shard transactions") {
  ScenarioConfig c = Small(Policy::kBestResponse);
  c.pricing.alpha = 0.01;
  Simulation sim(c);
  for (int k = 0; k < 2000; ++k) sim.Step();
  // Once estimates have settled, accepted transactions stay in one shard and
  // pay only the loading of that shard.
  const auto loading = ShardLoading(sim.pool());
  int single = 0, seen = 0;
  for (int k = 0; k < 200; ++k) {
    const auto before = ShardLoading(sim.pool());
    const MetricSample& s = sim.Step();
    if (!s.accepted || s.block_boundary) continue;
    ++seen;
    if (s.cardinality == 1) {
      ++single;
      const auto& tx = sim.pool().transactions().back();
      CHECK(s.fee == doctest::Approx(before[tx.receive_shard().value()] *
                                     c.pricing.max_fee));
    }
  }
  CHECK(seen > 0);
  CHECK(single == seen);
}

TEST_CASE("block boundary when a shard fills") {
  ScenarioConfig c = Small(Policy::kRandom);
  c.slots_per_shard = 3;
  c.blocks_target = 1;
  Simulation sim(c);
  while (sim.blocks().empty()) {
    const auto counts = sim.pool().per_shard_counts();
    const bool near = std::any_of(counts.begin(), counts.end(),
                                  [](std::int64_t n) { return n == 2; });
    const MetricSample& s = sim.Step();
    if (s.block_boundary) CHECK(near);
  }
  const auto& counts = sim.blocks()[0].shard_counts;
  CHECK(*std::max_element(counts.begin(), counts.end()) == 3);
  CHECK(sim.pool().empty());
  CHECK(sim.trace().back().block_boundary);
}

TEST_CASE("block accounting and trigger") {
  for (Policy policy : {Policy::kRandom, Policy::kFixedPrice, Policy::kBestResponse}) {
    const RunResult r = RunScenario(Small(policy));
    CHECK(r.blocks.size() == 3);
    std::int64_t in_blocks = 0;
    for (std::size_t b = 0; b < r.blocks.size(); ++b) {
      in_blocks += static_cast<std::int64_t>(r.blocks[b].transactions.size());
      const auto& counts = r.blocks[b].shard_counts;
      CHECK(*std::max_element(counts.begin(), counts.end()) == 200);
      CHECK(counts[r.block_summaries[b].trigger_shard] == 200);
    }
    CHECK(in_blocks == r.summary.accepted);
    CHECK(r.summary.attempts == static_cast<std::int64_t>(r.trace.size()));
    CHECK(r.summary.rejected == 0);
  }
}

TEST_CASE("trace metrics match a replay of the blocks") {
  const RunResult r = RunScenario(Small(Policy::kBestResponse));
  const int m = r.config.num_shards;
  std::vector<const Transaction*> accepted;
  for (const auto& b : r.blocks) {
    for (const auto& tx : b.transactions) accepted.push_back(&tx);
  }
  std::size_t next = 0;
  std::vector<std::int64_t> counts(m, 0);
  std::int64_t usages = 0, cardinality = 0, pool_size = 0;
  Rng rng(4);
  std::vector<bool> sampled(r.trace.size(), false);
  for (int k = 0; k < 1000; ++k) sampled[rng() % r.trace.size()] = true;
  int compared = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const MetricSample& s = r.trace[i];
    if (s.accepted) {
      const Transaction& tx = *accepted.at(next++);
      for (int sh = 0; sh < m; ++sh) {
        if (tx.amounts()[sh] > 0.0) {
          ++counts[sh];
          ++usages;
        }
      }
      cardinality += tx.cardinality();
      ++pool_size;
    }
    if (sampled[i]) {
      ++compared;
      double loading_sum = 0.0;
      for (int sh = 0; sh < m; ++sh) {
        const double u = usages == 0 ? 0.0 : static_cast<double>(counts[sh]) / usages;
        CHECK(s.usage[sh] == doctest::Approx(u).epsilon(1e-12));
        loading_sum += std::max(0.0, u - 1.0 / m);
      }
      CHECK(s.loading_sum == doctest::Approx(loading_sum).epsilon(1e-12));
      const double mean =
          pool_size == 0 ? 0.0 : static_cast<double>(cardinality) / pool_size;
      CHECK(s.mean_cardinality == doctest::Approx(mean).epsilon(1e-12));
    }
    if (s.block_boundary) {
      std::fill(counts.begin(), counts.end(), 0);
      usages = cardinality = pool_size = 0;
    }
  }
  CHECK(next == accepted.size());
  CHECK(compared > 500);
}

TEST_CASE("same seed gives identical traces") {
  for (Policy policy : {Policy::kRandom, Policy::kBestResponse}) {
    ScenarioConfig c = Small(policy);
    c.tie_break = TieBreak::kRandom;
    CHECK(Csv(RunScenario(c)) == Csv(RunScenario(c)));
    ScenarioConfig other = c;
    other.seed = 6;
    CHECK(Csv(RunScenario(c)) != Csv(RunScenario(other)));
  }
}

TEST_CASE("fixed price charges nothing") {
  const RunResult r = RunScenario(Small(Policy::kFixedPrice));
  CHECK(r.summary.total_fees == 0.0);
  for (const auto& s : r.trace) CHECK(s.fee == 0.0);
}

TEST_CASE("gamma zero choices match the raw best responses step by step") {
  ScenarioConfig c = Small(Policy::kBestResponse);
  c.pricing.alpha = 0.05;
  c.slots_per_shard = 100;
  Simulation sim(c);
  for (int k = 0; k < 3000; ++k) {
    const auto loading = ShardLoading(sim.pool());
    const PriceMatrix price = BuildPriceMatrix(loading, c.pricing);
    std::vector<std::vector<double>> v_hat, w_hat;
    std::vector<std::int64_t> seen;
    for (const auto& e : sim.edge_states()) {
      v_hat.push_back(e.send_estimate.Estimate());
      w_hat.push_back(e.request_estimate.Estimate());
      seen.push_back(e.send_estimate.observations());
    }
    const MetricSample& s = sim.Step();
    REQUIRE(s.accepted);
    // The edge that moved is the one whose histogram grew.
    std::size_t edge = 0;
    while (sim.edge_states()[edge].send_estimate.observations() == seen[edge]) {
      ++edge;
    }
    const auto& state = sim.edge_states()[edge];
    const int request = static_cast<int>(
        std::find(state.strategy.request.begin(), state.strategy.request.end(), 1.0) -
        state.strategy.request.begin());
    const int send = static_cast<int>(
        std::find(state.strategy.send.begin(), state.strategy.send.end(), 1.0) -
        state.strategy.send.begin());
    CHECK(request == BestRequestShard(price.values, v_hat[edge]).value());
    CHECK(send == BestSendShard(price.values, w_hat[edge]).value());
  }
}

TEST_CASE("estimates concentrate in the efficiency pricing preset") {
  const RunResult r = RunScenario(Preset("fig4"));
  CHECK(r.summary.rejected == 0);
  CHECK(r.summary.min_estimate_top_mass > 0.9);
}

TEST_CASE("reproduction presets never reject") {
  for (const char* name : {"fig2", "fig3"}) {
    CHECK(RunScenario(Preset(name)).summary.rejected == 0);
  }
}

TEST_CASE("stalled runs abort") {
  ScenarioConfig c = Small(Policy::kBestResponse);
  c.initial_balance = 0.0;
  c.slots_per_shard = 2;
  c.num_shards = 2;
  CHECK_THROWS_WITH_AS(RunScenario(c), doctest::Contains("no block assembled"),
                       ShardsimError);
}

TEST_CASE("invalid configs are rejected up front") {
  ScenarioConfig c = Small(Policy::kRandom);
  c.num_agents = 0;
  CHECK_THROWS_AS(Simulation{c}, ShardsimError);
}

}  // namespace
}  // namespace shardsim
