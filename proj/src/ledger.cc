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

#include "shardsim/ledger.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace shardsim {

std::string ShardSet::ToString() const {
  std::string out = "{";
  bool first = true;
  ForEach([&](ShardId s) {
    if (!first) out += ",";
    out += std::to_string(s.value());
    first = false;
  });
  return out + "}";
}

Transaction::Transaction(AgentId receiver, AgentId sender,
                         ShardId receive_shard, std::vector<double> amounts,
                         double fee_paid)
    : receiver_(receiver),
      sender_(sender),
      receive_shard_(receive_shard),
      amounts_(std::move(amounts)),
      fee_paid_(fee_paid) {
  if (amounts_.empty() || static_cast<int>(amounts_.size()) > kMaxShards) {
    throw ShardsimError("transaction amount vector must have 1.." +
                        std::to_string(kMaxShards) + " entries");
  }
  if (!(fee_paid_ >= 0.0)) throw ShardsimError("fee must be non-negative");
  for (std::size_t s = 0; s < amounts_.size(); ++s) {
    if (!(amounts_[s] >= 0.0)) {
      throw ShardsimError("transaction amounts must be non-negative");
    }
    if (amounts_[s] > 0.0) shards_.Insert(ShardId(static_cast<int>(s)));
    total_amount_ += amounts_[s];
  }
  if (shards_.empty()) {
    throw ShardsimError("transaction must move a positive amount");
  }
  if (!shards_.Contains(receive_shard_)) {
    throw ShardsimError("receive shard must be one of the transaction shards");
  }
}

Transaction Transaction::FromShardSet(AgentId receiver, AgentId sender,
                                      ShardId receive_shard, ShardSet shards,
                                      int num_shards, double amount,
                                      double fee_paid) {
  if (shards.empty() || shards.Extent() > num_shards) {
    throw ShardsimError("shard set " + shards.ToString() +
                        " invalid for " + std::to_string(num_shards) +
                        " shards");
  }
  if (!(amount > 0.0)) throw ShardsimError("amount must be positive");
  std::vector<double> amounts(num_shards, 0.0);
  const double share = amount / shards.size();
  shards.ForEach([&](ShardId s) { amounts[s.value()] = share; });
  return Transaction(receiver, sender, receive_shard, std::move(amounts),
                     fee_paid);
}

TransactionPool::TransactionPool(int num_shards)
    : num_shards_(num_shards), per_shard_counts_(num_shards, 0) {
  if (num_shards < 1 || num_shards > kMaxShards) {
    throw ShardsimError("shard count must be in [1, " +
                        std::to_string(kMaxShards) + "]");
  }
}

void TransactionPool::Append(Transaction tx) {
  if (tx.num_shards() != num_shards_) {
    throw ShardsimError("transaction shard count does not match pool");
  }
  tx.shards().ForEach([&](ShardId s) { ++per_shard_counts_[s.value()]; });
  total_usages_ += tx.cardinality();
  transactions_.push_back(std::move(tx));
}

void TransactionPool::Reset() {
  transactions_.clear();
  std::fill(per_shard_counts_.begin(), per_shard_counts_.end(), 0);
  total_usages_ = 0;
}

std::vector<Transaction> TransactionPool::Drain() {
  std::vector<Transaction> out = std::move(transactions_);
  transactions_ = {};
  Reset();
  return out;
}

std::vector<double> ShardUsage(const TransactionPool& pool) {
  std::vector<double> usage(pool.num_shards(), 0.0);
  if (pool.total_usages() == 0) return usage;
  const double total = static_cast<double>(pool.total_usages());
  auto counts = pool.per_shard_counts();
  for (int s = 0; s < pool.num_shards(); ++s) {
    usage[s] = static_cast<double>(counts[s]) / total;
  }
  return usage;
}

std::vector<double> LoadingFromUsage(std::span<const double> usage) {
  const double uniform = 1.0 / static_cast<double>(usage.size());
  std::vector<double> loading(usage.size());
  // An all-zero usage vector is the empty pool: no loading anywhere.
  const bool empty = std::all_of(usage.begin(), usage.end(),
                                 [](double u) { return u == 0.0; });
  for (std::size_t s = 0; s < usage.size(); ++s) {
    loading[s] = empty ? 0.0 : std::max(0.0, usage[s] - uniform);
  }
  return loading;
}

std::vector<double> ShardLoading(const TransactionPool& pool) {
  return LoadingFromUsage(ShardUsage(pool));
}

double ShardBalance(std::span<const double> loading, ShardSet shards) {
  if (shards.empty()) throw ShardsimError("shard set must be non-empty");
  if (shards.Extent() > static_cast<int>(loading.size())) {
    throw ShardsimError("shard set " + shards.ToString() +
                        " exceeds loading vector");
  }
  double sum = 0.0;
  shards.ForEach([&](ShardId s) { sum += loading[s.value()]; });
  return 1.0 - sum;
}

double ShardBalance(const TransactionPool& pool, ShardSet shards) {
  return ShardBalance(ShardLoading(pool), shards);
}

double MeanCardinality(const TransactionPool& pool) {
  if (pool.empty()) return 0.0;
  return static_cast<double>(pool.total_usages()) /
         static_cast<double>(pool.size());
}

double PoolEfficiency(const TransactionPool& pool) {
  if (pool.empty()) {
    throw ShardsimError("efficiency undefined for empty pool");
  }
  return ShardBalance(pool, ShardSet::All(pool.num_shards())) /
         MeanCardinality(pool);
}

double TransactionEfficiency(const Transaction& tx,
                             std::span<const double> loading) {
  return ShardBalance(loading, tx.shards()) / tx.cardinality();
}

double TransactionEfficiency(const Transaction& tx,
                             const TransactionPool& pool) {
  return TransactionEfficiency(tx, ShardLoading(pool));
}

bool ShouldAssemble(const TransactionPool& pool, int slots_per_shard) {
  if (slots_per_shard < 1) throw ShardsimError("slots per shard must be >= 1");
  auto counts = pool.per_shard_counts();
  return std::any_of(counts.begin(), counts.end(),
                     [&](std::int64_t c) { return c >= slots_per_shard; });
}

Block AssembleBlock(std::int64_t index, TransactionPool& pool) {
  Block block;
  block.index = index;
  auto counts = pool.per_shard_counts();
  block.shard_counts.assign(counts.begin(), counts.end());
  if (!pool.empty()) {
    block.balance = ShardBalance(pool, ShardSet::All(pool.num_shards()));
    block.mean_cardinality = MeanCardinality(pool);
    block.efficiency = block.balance / block.mean_cardinality;
  }
  block.transactions = pool.Drain();
  return block;
}

BalanceSheet::BalanceSheet(int num_agents, int num_shards)
    : num_agents_(num_agents),
      num_shards_(num_shards),
      balances_(static_cast<std::size_t>(num_agents) * num_shards, 0.0) {
  if (num_agents < 0 || num_shards < 1) {
    throw ShardsimError("balance sheet needs a shard count >= 1");
  }
}

std::size_t BalanceSheet::Offset(AgentId agent, ShardId shard) const {
  if (agent.value() < 0 || agent.value() >= num_agents_ ||
      shard.value() < 0 || shard.value() >= num_shards_) {
    throw ShardsimError("balance index out of range");
  }
  return static_cast<std::size_t>(agent.value()) * num_shards_ +
         shard.value();
}

double BalanceSheet::Get(AgentId agent, ShardId shard) const {
  return balances_[Offset(agent, shard)];
}

void BalanceSheet::Set(AgentId agent, ShardId shard, double amount) {
  if (!(amount >= 0.0)) throw ShardsimError("balances must be non-negative");
  balances_[Offset(agent, shard)] = amount;
}

std::span<const double> BalanceSheet::Of(AgentId agent) const {
  return std::span<const double>(balances_).subspan(Offset(agent, ShardId(0)),
                                                    num_shards_);
}

void BalanceSheet::Deposit(AgentId agent, ShardId shard, double amount) {
  if (!(amount >= 0.0)) throw ShardsimError("deposit must be non-negative");
  balances_[Offset(agent, shard)] += amount;
}

void BalanceSheet::Withdraw(AgentId agent, ShardId shard, double amount) {
  double& slot = balances_[Offset(agent, shard)];
  if (!(amount >= 0.0) || amount > slot) {
    throw ShardsimError("withdrawal of " + std::to_string(amount) +
                        " would overdraw agent " +
                        std::to_string(agent.value()) + " in shard " +
                        std::to_string(shard.value()));
  }
  slot -= amount;
}

double BalanceSheet::Total() const {
  return std::accumulate(balances_.begin(), balances_.end(), 0.0);
}

}  // namespace shardsim
