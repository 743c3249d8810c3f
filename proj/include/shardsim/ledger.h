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

#ifndef SHARDSIM_LEDGER_H_
#define SHARDSIM_LEDGER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "shardsim/types.h"

// Shards, transactions, pools, blocks and the pool-level throughput metrics.
//
// Usage u_s is the share of all shard usages in the pool that land on shard
// s, loading is the positive excess of usage over the uniform share 1/m, the
// balance of a shard set is one minus its summed loading, and the efficiency
// of a pool is its full-set balance divided by its mean cardinality. An empty
// pool has zero usage and loading everywhere and balance 1.

namespace shardsim {

class Transaction {
 public:
  // `amounts` holds the per-shard quantities; it must be non-negative with a
  // positive sum, and its length is the shard count.
  Transaction(AgentId receiver, AgentId sender, ShardId receive_shard,
              std::vector<double> amounts, double fee_paid);

  // Builds a transaction touching exactly `shards`, splitting `amount`
  // evenly across them. `receive_shard` must be a member of `shards`.
  static Transaction FromShardSet(AgentId receiver, AgentId sender,
                                  ShardId receive_shard, ShardSet shards,
                                  int num_shards, double amount,
                                  double fee_paid);

  AgentId receiver() const { return receiver_; }
  AgentId sender() const { return sender_; }
  ShardId receive_shard() const { return receive_shard_; }
  std::span<const double> amounts() const { return amounts_; }
  double fee_paid() const { return fee_paid_; }
  double total_amount() const { return total_amount_; }
  int num_shards() const { return static_cast<int>(amounts_.size()); }

  ShardSet shards() const { return shards_; }
  int cardinality() const { return shards_.size(); }

 private:
  AgentId receiver_;
  AgentId sender_;
  ShardId receive_shard_;
  std::vector<double> amounts_;
  double fee_paid_ = 0.0;
  double total_amount_ = 0.0;
  ShardSet shards_;
};

// Pending transactions with per-shard usage counts kept up to date on every
// append.
class TransactionPool {
 public:
  explicit TransactionPool(int num_shards);

  void Append(Transaction tx);
  void Reset();

  // Moves the transactions out and leaves the pool empty.
  std::vector<Transaction> Drain();

  int num_shards() const { return num_shards_; }
  std::size_t size() const { return transactions_.size(); }
  bool empty() const { return transactions_.empty(); }
  const std::vector<Transaction>& transactions() const { return transactions_; }

  // |P_s| for every shard.
  std::span<const std::int64_t> per_shard_counts() const {
    return per_shard_counts_;
  }
  // Sum of cardinalities over the pool.
  std::int64_t total_usages() const { return total_usages_; }

 private:
  int num_shards_;
  std::vector<Transaction> transactions_;
  std::vector<std::int64_t> per_shard_counts_;
  std::int64_t total_usages_ = 0;
};

struct Block {
  std::int64_t index = 0;
  std::vector<Transaction> transactions;
  std::vector<std::int64_t> shard_counts;
  double efficiency = 0.0;
  double mean_cardinality = 0.0;
  double balance = 1.0;
};

std::vector<double> ShardUsage(const TransactionPool& pool);
std::vector<double> ShardLoading(const TransactionPool& pool);
// Loading computed from a usage vector of length m.
std::vector<double> LoadingFromUsage(std::span<const double> usage);

// 1 - sum of loading over `shards`. Throws on an empty set.
double ShardBalance(std::span<const double> loading, ShardSet shards);
double ShardBalance(const TransactionPool& pool, ShardSet shards);

// Mean cardinality; 0 for the empty pool.
double MeanCardinality(const TransactionPool& pool);

// Full-set balance over mean cardinality. Throws on the empty pool.
double PoolEfficiency(const TransactionPool& pool);

// Balance of the transaction's shard set over its cardinality.
double TransactionEfficiency(const Transaction& tx,
                             std::span<const double> loading);
double TransactionEfficiency(const Transaction& tx,
                             const TransactionPool& pool);

// True once any shard holds at least `slots_per_shard` transactions.
bool ShouldAssemble(const TransactionPool& pool, int slots_per_shard);

// Cuts a block from the pool contents and empties the pool.
Block AssembleBlock(std::int64_t index, TransactionPool& pool);

// Per-agent, per-shard resource holdings. Entries never go negative.
class BalanceSheet {
 public:
  BalanceSheet(int num_agents, int num_shards);

  int num_agents() const { return num_agents_; }
  int num_shards() const { return num_shards_; }

  double Get(AgentId agent, ShardId shard) const;
  void Set(AgentId agent, ShardId shard, double amount);
  std::span<const double> Of(AgentId agent) const;

  void Deposit(AgentId agent, ShardId shard, double amount);
  // Throws if the withdrawal would leave a negative balance.
  void Withdraw(AgentId agent, ShardId shard, double amount);

  double Total() const;

 private:
  std::size_t Offset(AgentId agent, ShardId shard) const;

  int num_agents_;
  int num_shards_;
  std::vector<double> balances_;
};

}  // namespace shardsim

#endif  // SHARDSIM_LEDGER_H_
