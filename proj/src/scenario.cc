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

#include "shardsim/scenario.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace shardsim {
namespace {

template <typename Enum, std::size_t N>
Enum ParseEnum(std::string_view text,
               const std::pair<std::string_view, Enum> (&table)[N],
               const char* what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  std::string options;
  for (const auto& [name, value] : table) {
    if (!options.empty()) options += ", ";
    options += name;
  }
  throw ShardsimError("unknown " + std::string(what) + " '" +
                      std::string(text) + "' (expected one of: " + options +
                      ")");
}

template <typename Enum, std::size_t N>
std::string_view EnumName(Enum value,
                          const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

constexpr std::pair<std::string_view, TopologyKind> kTopologies[] = {
    {"ring", TopologyKind::kRing},
    {"path", TopologyKind::kPath},
    {"complete", TopologyKind::kComplete},
    {"preferential_attachment", TopologyKind::kPreferentialAttachment},
};
constexpr std::pair<std::string_view, Policy> kPolicies[] = {
    {"random", Policy::kRandom},
    {"fixed_price", Policy::kFixedPrice},
    {"best_response", Policy::kBestResponse},
};
constexpr std::pair<std::string_view, SendPolicy> kSendPolicies[] = {
    {"best_response", SendPolicy::kBestResponse},
    {"funded_shard", SendPolicy::kFundedShard},
};
constexpr std::pair<std::string_view, Generation> kGenerations[] = {
    {"round_shuffle", Generation::kRoundShuffle},
    {"uniform_edge", Generation::kUniformEdge},
};
constexpr std::pair<std::string_view, BalanceMode> kBalanceModes[] = {
    {"staggered", BalanceMode::kStaggered},
    {"uniform", BalanceMode::kUniform},
};
constexpr std::pair<std::string_view, TieBreak> kTieBreaks[] = {
    {"lowest_index", TieBreak::kLowestIndex},
    {"random", TieBreak::kRandom},
};

}  // namespace

Network::Network(int num_agents, std::vector<Edge> edges)
    : num_agents_(num_agents),
      edges_(std::move(edges)),
      neighbors_(std::max(num_agents, 0)) {
  if (num_agents < 1) throw ShardsimError("network needs at least one agent");
  for (const Edge& e : edges_) {
    const int i = e.receiver.value();
    const int j = e.sender.value();
    if (i < 0 || i >= num_agents || j < 0 || j >= num_agents) {
      throw ShardsimError("edge endpoint out of range");
    }
    if (i == j) throw ShardsimError("self-loops are not allowed");
    neighbors_[i].push_back(e.sender);
  }
}

std::vector<int> Network::InDegrees() const {
  std::vector<int> out(num_agents_, 0);
  for (const Edge& e : edges_) ++out[e.sender.value()];
  return out;
}

std::vector<int> Network::OutDegrees() const {
  std::vector<int> out(num_agents_, 0);
  for (const Edge& e : edges_) ++out[e.receiver.value()];
  return out;
}

bool Network::WeaklyConnected() const {
  std::vector<int> parent(num_agents_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = num_agents_;
  for (const Edge& e : edges_) {
    int a = find(e.receiver.value());
    int b = find(e.sender.value());
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Network GenerateRing(int num_agents) {
  if (num_agents < 3) throw ShardsimError("ring needs at least 3 agents");
  std::vector<Edge> edges;
  edges.reserve(2 * num_agents);
  for (int i = 0; i < num_agents; ++i) {
    edges.push_back({AgentId(i), AgentId((i + 1) % num_agents)});
    edges.push_back({AgentId(i), AgentId((i + num_agents - 1) % num_agents)});
  }
  return Network(num_agents, std::move(edges));
}

Network GeneratePath(int num_agents) {
  if (num_agents < 2) throw ShardsimError("path needs at least 2 agents");
  std::vector<Edge> edges;
  edges.reserve(2 * (num_agents - 1));
  for (int i = 0; i + 1 < num_agents; ++i) {
    edges.push_back({AgentId(i), AgentId(i + 1)});
    edges.push_back({AgentId(i + 1), AgentId(i)});
  }
  return Network(num_agents, std::move(edges));
}

Network GenerateComplete(int num_agents) {
  if (num_agents < 2) throw ShardsimError("complete network needs 2 agents");
  std::vector<Edge> edges;
  for (int i = 0; i < num_agents; ++i) {
    for (int j = 0; j < num_agents; ++j) {
      if (i != j) edges.push_back({AgentId(i), AgentId(j)});
    }
  }
  return Network(num_agents, std::move(edges));
}

Network GeneratePreferentialAttachment(int num_agents, int attach,
                                       std::uint64_t seed) {
  if (attach < 1 || num_agents <= attach) {
    throw ShardsimError("preferential attachment needs n > attach >= 1");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<int> in_degree(num_agents, 0);
  const int core = attach + 1;
  for (int i = 1; i < core; ++i) {
    for (int j = 0; j < i; ++j) {
      edges.push_back({AgentId(i), AgentId(j)});
      ++in_degree[j];
    }
  }
  std::vector<double> weights;
  for (int i = core; i < num_agents; ++i) {
    weights.assign(i, 0.0);
    for (int j = 0; j < i; ++j) weights[j] = in_degree[j] + 1.0;
    std::vector<int> targets;
    for (int k = 0; k < attach; ++k) {
      std::discrete_distribution<int> pick(weights.begin(), weights.end());
      const int j = pick(rng);
      weights[j] = 0.0;  // sample without replacement
      targets.push_back(j);
    }
    std::sort(targets.begin(), targets.end());
    for (int j : targets) {
      edges.push_back({AgentId(i), AgentId(j)});
      ++in_degree[j];
    }
  }
  return Network(num_agents, std::move(edges));
}

void ScenarioConfig::Validate() const {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const char* message) {
    if (!ok) problems.emplace_back(message);
  };
  require(num_agents >= 1, "num_agents must be >= 1");
  require(num_shards >= 1 && num_shards <= kMaxShards,
          "num_shards must be in [1, 64]");
  require(slots_per_shard >= 1, "slots_per_shard must be >= 1");
  require(blocks_target >= 1, "blocks_target must be >= 1");
  require(pricing.alpha >= 0.0, "pricing.alpha must be >= 0");
  require(pricing.max_fee >= 0.0, "pricing.max_fee must be >= 0");
  require(pricing.nominal_price >= 0.0, "pricing.nominal_price must be >= 0");
  require(gamma_request >= 0.0 && gamma_request <= 1.0,
          "gamma_request must be in [0, 1]");
  require(gamma_send >= 0.0 && gamma_send <= 1.0,
          "gamma_send must be in [0, 1]");
  require(initial_balance >= 0.0, "initial_balance must be >= 0");
  require(amount > 0.0, "amount must be > 0");
  require(max_cardinality >= 1, "max_cardinality must be >= 1");
  require(estimate_prior >= 0.0, "estimate_prior must be >= 0");
  switch (topology) {
    case TopologyKind::kRing:
      require(num_agents >= 3, "ring topology needs num_agents >= 3");
      break;
    case TopologyKind::kPath:
    case TopologyKind::kComplete:
      require(num_agents >= 2, "topology needs num_agents >= 2");
      break;
    case TopologyKind::kPreferentialAttachment:
      require(attach >= 1 && num_agents > attach,
              "preferential_attachment needs num_agents > attach >= 1");
      break;
  }
  if (!problems.empty()) {
    std::string message = "invalid scenario '" + name + "':";
    for (const auto& p : problems) message += "\n  - " + p;
    throw ShardsimError(message);
  }
}

Network BuildNetwork(const ScenarioConfig& config) {
  switch (config.topology) {
    case TopologyKind::kRing:
      return GenerateRing(config.num_agents);
    case TopologyKind::kPath:
      return GeneratePath(config.num_agents);
    case TopologyKind::kComplete:
      return GenerateComplete(config.num_agents);
    case TopologyKind::kPreferentialAttachment:
      // Own stream, so the network depends on the seed alone and is shared
      // by every policy run with that seed.
      return GeneratePreferentialAttachment(config.num_agents, config.attach,
                                            config.seed ^ 0x6e6574776f726bULL);
  }
  throw ShardsimError("unknown topology");
}

BalanceSheet InitialBalances(const ScenarioConfig& config) {
  BalanceSheet sheet(config.num_agents, config.num_shards);
  for (int i = 0; i < config.num_agents; ++i) {
    if (config.balance_mode == BalanceMode::kStaggered) {
      sheet.Set(AgentId(i), ShardId(i % config.num_shards),
                config.initial_balance);
    } else {
      for (int s = 0; s < config.num_shards; ++s) {
        sheet.Set(AgentId(i), ShardId(s), config.initial_balance);
      }
    }
  }
  return sheet;
}

std::string_view ToString(TopologyKind kind) { return EnumName(kind, kTopologies); }
std::string_view ToString(Policy policy) { return EnumName(policy, kPolicies); }
std::string_view ToString(SendPolicy policy) {
  return EnumName(policy, kSendPolicies);
}
std::string_view ToString(Generation generation) {
  return EnumName(generation, kGenerations);
}
std::string_view ToString(BalanceMode mode) {
  return EnumName(mode, kBalanceModes);
}
std::string_view ToString(TieBreak tie_break) {
  return EnumName(tie_break, kTieBreaks);
}

TopologyKind ParseTopology(std::string_view text) {
  return ParseEnum(text, kTopologies, "topology");
}
Policy ParsePolicy(std::string_view text) {
  return ParseEnum(text, kPolicies, "policy");
}
SendPolicy ParseSendPolicy(std::string_view text) {
  return ParseEnum(text, kSendPolicies, "send policy");
}
Generation ParseGeneration(std::string_view text) {
  return ParseEnum(text, kGenerations, "generation mode");
}
BalanceMode ParseBalanceMode(std::string_view text) {
  return ParseEnum(text, kBalanceModes, "balance mode");
}
TieBreak ParseTieBreak(std::string_view text) {
  return ParseEnum(text, kTieBreaks, "tie break");
}

}  // namespace shardsim
