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

#ifndef SHARDSIM_SIMULATION_H_
#define SHARDSIM_SIMULATION_H_

#include <cstdint>
#include <deque>
#include <vector>

#include "shardsim/agent_policy.h"
#include "shardsim/ledger.h"
#include "shardsim/scenario.h"
#include "shardsim/strategy_game.h"

namespace shardsim {

// One row of the metric trace, recorded for every transaction attempt.
// Pool metrics describe the pool right after the attempt; on a block
// boundary that is the full pool the block was cut from.
struct MetricSample {
  std::int64_t tx_index = 0;
  std::vector<double> usage;
  double loading_sum = 0.0;
  double mean_cardinality = 0.0;
  double fee = 0.0;
  int cardinality = 0;  // 0 when rejected
  bool accepted = false;
  bool block_boundary = false;
  std::int64_t block_index = 0;
  // max - min of the per-shard share of requests made in the current block.
  double request_spread = 0.0;
};

// What each side of an edge has learned, and the last realized choices.
struct EdgeState {
  EdgeStrategy strategy;
  EmpiricalEstimate send_estimate;     // receiver's estimate of the sender
  EmpiricalEstimate request_estimate;  // sender's estimate of the receiver
};

struct BlockSummary {
  std::int64_t index = 0;
  std::int64_t transactions = 0;
  std::int64_t first_tx_index = 0;
  std::int64_t last_tx_index = 0;
  std::vector<std::int64_t> shard_counts;
  int trigger_shard = 0;
  double efficiency = 0.0;
  double mean_cardinality = 0.0;
  double balance = 0.0;
  double loading_sum = 0.0;
  double request_spread = 0.0;
  // Potential of the last realized edge strategies under the block's P.
  double potential = 0.0;
};

struct RunSummary {
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t blocks = 0;
  double total_fees = 0.0;
  double final_efficiency = 0.0;
  double final_mean_cardinality = 0.0;
  double min_estimate_top_mass = 0.0;
  double mean_estimate_top_mass = 0.0;
};

struct RunResult {
  ScenarioConfig config;
  std::size_t num_edges = 0;
  std::vector<Block> blocks;
  std::vector<BlockSummary> block_summaries;
  std::vector<MetricSample> trace;
  RunSummary summary;
};

// A fresh uniformly random order of all edges.
std::vector<std::size_t> GenerateRoundShuffle(std::size_t num_edges, Rng& rng);
// One edge drawn uniformly.
std::size_t GenerateUniformEdge(std::size_t num_edges, Rng& rng);

// Single-threaded simulation of request, fulfillment and block assembly.
// Randomness comes from two streams seeded by the config seed: one for edge
// generation and random policy draws, one for tie breaking.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);

  // Processes one transaction attempt end to end and returns its sample.
  const MetricSample& Step();

  // Steps until blocks_target blocks are assembled. Throws if
  // 100 * m * slots attempts pass without a block.
  RunResult Run() &&;

  const ScenarioConfig& config() const { return config_; }
  const Network& network() const { return network_; }
  const TransactionPool& pool() const { return pool_; }
  const BalanceSheet& balances() const { return balances_; }
  const std::vector<EdgeState>& edge_states() const { return edges_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<BlockSummary>& block_summaries() const {
    return block_summaries_;
  }
  const std::vector<MetricSample>& trace() const { return trace_; }
  double total_fees() const { return total_fees_; }

 private:
  std::size_t NextEdge();
  void CutBlock(const std::vector<double>& loading, std::int64_t last_index);
  double RequestSpread() const;

  ScenarioConfig config_;
  Network network_;
  BalanceSheet balances_;
  TransactionPool pool_;
  std::vector<EdgeState> edges_;
  Rng rng_;
  TieBreaker ties_;
  std::deque<std::size_t> round_;
  std::vector<Block> blocks_;
  std::vector<BlockSummary> block_summaries_;
  std::vector<MetricSample> trace_;
  std::vector<std::int64_t> block_requests_;
  std::int64_t block_first_index_ = 0;
  std::int64_t accepted_ = 0;
  double total_fees_ = 0.0;
};

RunResult RunScenario(const ScenarioConfig& config);

}  // namespace shardsim

#endif  // SHARDSIM_SIMULATION_H_
