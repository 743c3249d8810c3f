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

#include "shardsim/simulation.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace shardsim {
namespace {

constexpr std::uint64_t kTieStreamSalt = 0x7469652d6272656bULL;

PricingParams EffectivePricing(const ScenarioConfig& config) {
  PricingParams params = config.pricing;
  // A fixed price is the pricing function with the surcharge switched off.
  if (config.policy == Policy::kFixedPrice) params.max_fee = 0.0;
  return params;
}

double Sum(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

std::vector<std::size_t> GenerateRoundShuffle(std::size_t num_edges, Rng& rng) {
  std::vector<std::size_t> order(num_edges);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::size_t GenerateUniformEdge(std::size_t num_edges, Rng& rng) {
  if (num_edges == 0) throw ShardsimError("network has no edges");
  std::uniform_int_distribution<std::size_t> pick(0, num_edges - 1);
  return pick(rng);
}

Simulation::Simulation(ScenarioConfig config)
    : config_((config.Validate(), std::move(config))),
      network_(BuildNetwork(config_)),
      balances_(InitialBalances(config_)),
      pool_(config_.num_shards),
      rng_(config_.seed),
      ties_(config_.tie_break, config_.seed ^ kTieStreamSalt),
      block_requests_(config_.num_shards, 0) {
  if (network_.num_edges() == 0) throw ShardsimError("network has no edges");
  const int m = config_.num_shards;
  edges_.reserve(network_.num_edges());
  for (std::size_t e = 0; e < network_.num_edges(); ++e) {
    edges_.push_back(EdgeState{
        EdgeStrategy{UniformStrategy(m), UniformStrategy(m)},
        EmpiricalEstimate(m, config_.estimate_prior),
        EmpiricalEstimate(m, config_.estimate_prior)});
  }
}

std::size_t Simulation::NextEdge() {
  if (config_.generation == Generation::kUniformEdge) {
    return GenerateUniformEdge(network_.num_edges(), rng_);
  }
  if (round_.empty()) {
    auto order = GenerateRoundShuffle(network_.num_edges(), rng_);
    round_.assign(order.begin(), order.end());
  }
  std::size_t next = round_.front();
  round_.pop_front();
  return next;
}

double Simulation::RequestSpread() const {
  const auto total = std::accumulate(block_requests_.begin(),
                                     block_requests_.end(), std::int64_t{0});
  if (total == 0) return 0.0;
  auto [lo, hi] = std::minmax_element(block_requests_.begin(),
                                      block_requests_.end());
  return static_cast<double>(*hi - *lo) / static_cast<double>(total);
}

const MetricSample& Simulation::Step() {
  const int m = config_.num_shards;
  const std::size_t edge_index = NextEdge();
  const Edge& edge = network_.edges()[edge_index];
  EdgeState& state = edges_[edge_index];

  const auto loading = ShardLoading(pool_);
  const PriceMatrix price = BuildPriceMatrix(loading, EffectivePricing(config_));
  const MarketView market{loading, price};
  const auto sender_funds = balances_.Of(edge.sender);

  ShardId request;
  FulfillmentResult fulfillment;
  if (config_.policy == Policy::kBestResponse) {
    request = ChooseRequestShard(config_.gamma_request,
                                 state.send_estimate.Estimate(), market, ties_);
    if (config_.send_policy == SendPolicy::kFundedShard) {
      fulfillment = ChooseSendShardsFunded(sender_funds, request, config_.amount,
                                           market, config_.max_cardinality,
                                           ties_);
    } else {
      fulfillment = ChooseSendShards(
          config_.gamma_send, sender_funds, state.request_estimate.Estimate(),
          request, config_.amount, market, config_.max_cardinality, ties_);
    }
  } else {
    std::uniform_int_distribution<int> pick(0, m - 1);
    request = ShardId(pick(rng_));
    fulfillment = ChooseSendShardsRandom(sender_funds, request, config_.amount,
                                         market, config_.max_cardinality, rng_);
  }

  MetricSample sample;
  sample.tx_index = static_cast<std::int64_t>(trace_.size());
  sample.block_index = static_cast<std::int64_t>(blocks_.size());
  sample.accepted = fulfillment.accepted;
  if (fulfillment.accepted) {
    Transaction tx = Transaction::FromShardSet(
        edge.receiver, edge.sender, request, fulfillment.shards, m,
        config_.amount, fulfillment.fee);
    Settle(balances_, tx);
    total_fees_ += fulfillment.fee;
    ++accepted_;
    sample.fee = fulfillment.fee;
    sample.cardinality = tx.cardinality();

    state.send_estimate.Observe(fulfillment.send_shard);
    state.request_estimate.Observe(request);
    state.strategy.request = PureStrategy(m, request);
    state.strategy.send = PureStrategy(m, fulfillment.send_shard);
    ++block_requests_[request.value()];

    pool_.Append(std::move(tx));
  }

  sample.usage = ShardUsage(pool_);
  const auto pool_loading = LoadingFromUsage(sample.usage);
  sample.loading_sum = Sum(pool_loading);
  sample.mean_cardinality = MeanCardinality(pool_);
  sample.request_spread = RequestSpread();
  if (fulfillment.accepted && ShouldAssemble(pool_, config_.slots_per_shard)) {
    sample.block_boundary = true;
    CutBlock(pool_loading, sample.tx_index);
  }
  trace_.push_back(std::move(sample));
  return trace_.back();
}

void Simulation::CutBlock(const std::vector<double>& loading,
                          std::int64_t last_index) {
  BlockSummary summary;
  summary.index = static_cast<std::int64_t>(blocks_.size());
  summary.first_tx_index = block_first_index_;
  summary.last_tx_index = last_index;
  summary.loading_sum = Sum(loading);
  summary.request_spread = RequestSpread();
  std::vector<EdgeStrategy> strategies;
  strategies.reserve(edges_.size());
  for (const auto& e : edges_) strategies.push_back(e.strategy);
  summary.potential = Potential(
      strategies, BuildPriceMatrix(loading, EffectivePricing(config_)).values);

  Block block = AssembleBlock(summary.index, pool_);
  summary.transactions = static_cast<std::int64_t>(block.transactions.size());
  summary.shard_counts = block.shard_counts;
  summary.trigger_shard = static_cast<int>(
      std::max_element(block.shard_counts.begin(), block.shard_counts.end()) -
      block.shard_counts.begin());
  summary.efficiency = block.efficiency;
  summary.mean_cardinality = block.mean_cardinality;
  summary.balance = block.balance;

  blocks_.push_back(std::move(block));
  block_summaries_.push_back(std::move(summary));
  std::fill(block_requests_.begin(), block_requests_.end(), 0);
  block_first_index_ = last_index + 1;
}

RunResult Simulation::Run() && {
  const std::int64_t guard = std::int64_t{100} * config_.num_shards *
                             config_.slots_per_shard;
  while (static_cast<int>(blocks_.size()) < config_.blocks_target) {
    const std::int64_t since_block =
        static_cast<std::int64_t>(trace_.size()) - block_first_index_;
    if (since_block >= guard) {
      throw ShardsimError(
          "no block assembled after " + std::to_string(since_block) +
          " attempts (" + std::to_string(accepted_) + " accepted so far, " +
          std::to_string(pool_.size()) + " pending); check balances");
    }
    Step();
  }

  RunResult result;
  result.config = config_;
  result.num_edges = network_.num_edges();
  RunSummary& summary = result.summary;
  summary.attempts = static_cast<std::int64_t>(trace_.size());
  summary.accepted = accepted_;
  summary.rejected = summary.attempts - accepted_;
  summary.blocks = static_cast<std::int64_t>(blocks_.size());
  summary.total_fees = total_fees_;
  if (!block_summaries_.empty()) {
    summary.final_efficiency = block_summaries_.back().efficiency;
    summary.final_mean_cardinality = block_summaries_.back().mean_cardinality;
  }
  double min_mass = 1.0;
  double mass_total = 0.0;
  for (const auto& e : edges_) {
    const double a = e.send_estimate.TopMass();
    const double b = e.request_estimate.TopMass();
    min_mass = std::min({min_mass, a, b});
    mass_total += a + b;
  }
  summary.min_estimate_top_mass = min_mass;
  summary.mean_estimate_top_mass =
      mass_total / (2.0 * static_cast<double>(edges_.size()));

  result.blocks = std::move(blocks_);
  result.block_summaries = std::move(block_summaries_);
  result.trace = std::move(trace_);
  return result;
}

RunResult RunScenario(const ScenarioConfig& config) {
  return Simulation(config).Run();
}

}  // namespace shardsim
