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

#ifndef SHARDSIM_SCENARIO_H_
#define SHARDSIM_SCENARIO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shardsim/ledger.h"
#include "shardsim/pricing.h"
#include "shardsim/strategy_game.h"
#include "shardsim/types.h"

namespace shardsim {

// (receiver, sender): the receiver may request transactions from the sender.
struct Edge {
  AgentId receiver;
  AgentId sender;

  bool operator==(const Edge&) const = default;
};

class Network {
 public:
  Network(int num_agents, std::vector<Edge> edges);

  int num_agents() const { return num_agents_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  // N_i: agents that i requests from.
  const std::vector<AgentId>& neighbors(AgentId agent) const {
    return neighbors_.at(agent.value());
  }
  std::vector<int> InDegrees() const;
  std::vector<int> OutDegrees() const;
  // Connectivity ignoring edge direction.
  bool WeaklyConnected() const;

 private:
  int num_agents_;
  std::vector<Edge> edges_;
  std::vector<std::vector<AgentId>> neighbors_;
};

// Each agent requests from both ring neighbours: 2n edges.
Network GenerateRing(int num_agents);
// Bidirectional chain: 2(n - 1) edges.
Network GeneratePath(int num_agents);
// Every ordered pair: n(n - 1) edges.
Network GenerateComplete(int num_agents);
// Directed growth model. A core of attach + 1 nodes is wired with one edge
// per pair (later node requests from earlier); every later node then
// requests from `attach` distinct earlier nodes picked with probability
// proportional to in-degree + 1. Edge count is
// attach(attach + 1)/2 + (n - attach - 1) attach.
Network GeneratePreferentialAttachment(int num_agents, int attach,
                                       std::uint64_t seed);

enum class TopologyKind { kRing, kPath, kComplete, kPreferentialAttachment };
enum class Policy { kRandom, kFixedPrice, kBestResponse };
// How a best-response sender picks its funding shards: by expected future
// fee against its estimate of the receiver, or from the shard set holding the
// most funds (a sender that pays out of its main account).
enum class SendPolicy { kBestResponse, kFundedShard };
enum class Generation { kRoundShuffle, kUniformEdge };
enum class BalanceMode { kStaggered, kUniform };

struct ScenarioConfig {
  std::string name = "custom";
  TopologyKind topology = TopologyKind::kRing;
  int num_agents = 20;
  int attach = 2;  // preferential attachment only
  int num_shards = 4;
  int slots_per_shard = 2500;
  int blocks_target = 5;
  PricingParams pricing;
  double gamma_request = 0.0;
  double gamma_send = 0.0;
  Policy policy = Policy::kBestResponse;
  SendPolicy send_policy = SendPolicy::kBestResponse;
  Generation generation = Generation::kRoundShuffle;
  BalanceMode balance_mode = BalanceMode::kStaggered;
  double initial_balance = 1e6;
  double amount = 10.0;
  std::uint64_t seed = 1;
  int max_cardinality = 2;
  TieBreak tie_break = TieBreak::kLowestIndex;
  double estimate_prior = 1.0;

  // Throws ShardsimError listing every violated constraint.
  void Validate() const;
};

Network BuildNetwork(const ScenarioConfig& config);

// Staggered: agent i holds the whole amount in shard i mod m. Uniform: every
// agent holds the amount in every shard.
BalanceSheet InitialBalances(const ScenarioConfig& config);

std::string_view ToString(TopologyKind kind);
std::string_view ToString(Policy policy);
std::string_view ToString(SendPolicy policy);
std::string_view ToString(Generation generation);
std::string_view ToString(BalanceMode mode);
std::string_view ToString(TieBreak tie_break);

TopologyKind ParseTopology(std::string_view text);
Policy ParsePolicy(std::string_view text);
SendPolicy ParseSendPolicy(std::string_view text);
Generation ParseGeneration(std::string_view text);
BalanceMode ParseBalanceMode(std::string_view text);
TieBreak ParseTieBreak(std::string_view text);

}  // namespace shardsim

#endif  // SHARDSIM_SCENARIO_H_
