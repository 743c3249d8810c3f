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
#include <set>
#include <vector>

#include "doctest.h"
#include "shardsim/scenario.h"

namespace shardsim {
namespace {

TEST_CASE("ring") {
  CHECK(GenerateRing(3).num_edges() == 6);
  const Network ring = GenerateRing(20);
  CHECK(ring.num_edges() == 40);
  for (int d : ring.OutDegrees()) CHECK(d == 2);
  for (int d : ring.InDegrees()) CHECK(d == 2);
  CHECK(ring.WeaklyConnected());
  CHECK(ring.neighbors(AgentId(0)) ==
        std::vector<AgentId>{AgentId(1), AgentId(19)});
  CHECK_THROWS_AS(GenerateRing(2), ShardsimError);
}

TEST_CASE("path and complete") {
  const Network path = GeneratePath(20);
  CHECK(path.num_edges() == 38);
  CHECK(path.WeaklyConnected());
  CHECK(path.OutDegrees().front() == 1);
  CHECK(path.OutDegrees()[5] == 2);
  CHECK(GenerateComplete(5).num_edges() == 20);
  CHECK_THROWS_AS(GeneratePath(1), ShardsimError);
}

TEST_CASE("network rejects bad edges") {
  CHECK_THROWS_AS(Network(3, {{AgentId(1), AgentId(1)}}), ShardsimError);
  CHECK_THROWS_AS(Network(3, {{AgentId(0), AgentId(3)}}), ShardsimError);
  CHECK_FALSE(Network(4, {{AgentId(0), AgentId(1)}}).WeaklyConnected());
}

TEST_CASE("preferential attachment") {
  const Network tree = GeneratePreferentialAttachment(5, 1, 3);
  CHECK(tree.num_edges() == 4);
  CHECK(tree.WeaklyConnected());

  for (int n : {10, 50, 100}) {
    for (int k : {1, 2, 3, 5}) {
      if (n <= k) continue;
      const Network net = GeneratePreferentialAttachment(n, k, 17);
      CHECK(net.num_edges() ==
            static_cast<std::size_t>(k * (k + 1) / 2 + (n - k - 1) * k));
      CHECK(net.WeaklyConnected());
      // Later nodes only request from earlier ones, never twice.
      std::set<std::pair<int, int>> seen;
      for (const Edge& e : net.edges()) {
        CHECK(e.sender.value() < e.receiver.value());
        CHECK(seen.emplace(e.receiver.value(), e.sender.value()).second);
      }
    }
  }

  CHECK(GeneratePreferentialAttachment(100, 2, 9).edges() ==
        GeneratePreferentialAttachment(100, 2, 9).edges());
  CHECK_FALSE(GeneratePreferentialAttachment(100, 2, 9).edges() ==
              GeneratePreferentialAttachment(100, 2, 10).edges());
  CHECK_THROWS_AS(GeneratePreferentialAttachment(3, 3, 1), ShardsimError);
  CHECK_THROWS_AS(GeneratePreferentialAttachment(3, 0, 1), ShardsimError);
}

TEST_CASE("preferential attachment has a heavy tail") {
  int heavy = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = GeneratePreferentialAttachment(100, 2, seed).InDegrees();
    if (*std::max_element(in.begin(), in.end()) > 4) ++heavy;
  }
  CHECK(heavy >= 95);
}

TEST_CASE("initial balances") {
  ScenarioConfig config;
  config.num_agents = 9;
  config.num_shards = 4;
  config.balance_mode = BalanceMode::kStaggered;
  const BalanceSheet staggered = InitialBalances(config);
  for (int i : {0, 4, 8}) {
    CHECK(staggered.Get(AgentId(i), ShardId(0)) == 1e6);
    CHECK(staggered.Get(AgentId(i), ShardId(1)) == 0.0);
  }
  CHECK(staggered.Get(AgentId(5), ShardId(1)) == 1e6);
  CHECK(staggered.Total() == 9 * 1e6);

  config.num_shards = 8;
  config.balance_mode = BalanceMode::kUniform;
  const BalanceSheet uniform = InitialBalances(config);
  for (int i = 0; i < 9; ++i) {
    for (int s = 0; s < 8; ++s) CHECK(uniform.Get(AgentId(i), ShardId(s)) == 1e6);
  }

  config.num_agents = 1;
  config.balance_mode = BalanceMode::kStaggered;
  CHECK(InitialBalances(config).Get(AgentId(0), ShardId(0)) == 1e6);
}

TEST_CASE("config validation lists every problem") {
  ScenarioConfig config;
  config.num_agents = 0;
  config.amount = 0.0;
  config.pricing.alpha = -1.0;
  try {
    config.Validate();
    FAIL("expected a validation error");
  } catch (const ShardsimError& e) {
    const std::string what = e.what();
    CHECK(what.find("num_agents") != std::string::npos);
    CHECK(what.find("amount") != std::string::npos);
    CHECK(what.find("pricing.alpha") != std::string::npos);
  }
  ScenarioConfig ok;
  CHECK_NOTHROW(ok.Validate());
}

TEST_CASE("enum names round trip") {
  for (auto t : {TopologyKind::kRing, TopologyKind::kPath, TopologyKind::kComplete,
                 TopologyKind::kPreferentialAttachment}) {
    CHECK(ParseTopology(ToString(t)) == t);
  }
  for (auto p : {Policy::kRandom, Policy::kFixedPrice, Policy::kBestResponse}) {
    CHECK(ParsePolicy(ToString(p)) == p);
  }
  for (auto p : {SendPolicy::kBestResponse, SendPolicy::kFundedShard}) {
    CHECK(ParseSendPolicy(ToString(p)) == p);
  }
  for (auto g : {Generation::kRoundShuffle, Generation::kUniformEdge}) {
    CHECK(ParseGeneration(ToString(g)) == g);
  }
  for (auto b : {BalanceMode::kStaggered, BalanceMode::kUniform}) {
    CHECK(ParseBalanceMode(ToString(b)) == b);
  }
  for (auto t : {TieBreak::kLowestIndex, TieBreak::kRandom}) {
    CHECK(ParseTieBreak(ToString(t)) == t);
  }
  CHECK_THROWS_AS(ParseTopology("torus"), ShardsimError);
}

}  // namespace
}  // namespace shardsim
