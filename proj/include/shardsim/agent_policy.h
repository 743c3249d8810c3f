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

#ifndef SHARDSIM_AGENT_POLICY_H_
#define SHARDSIM_AGENT_POLICY_H_

#include <span>
#include <string>
#include <vector>

#include "shardsim/ledger.h"
#include "shardsim/pricing.h"
#include "shardsim/strategy_game.h"
#include "shardsim/types.h"

// Receiver and sender decisions for a single transaction, and settlement.
//
// A receiver picks the shard s_i it wants to be paid in. The sender then
// picks a transaction shard set S_T containing s_i, funding amount plus fee
// from the shards of S_T. The "send shard" of a candidate set is the shard it
// adds beyond s_i (s_i itself for a single-shard transaction); it is what the
// receiver observes and what the sender's expected-price term is evaluated
// on.

namespace shardsim {

// Static per-agent preferences: the weight each role puts on the current fee
// versus the expected price of future transactions on the same edge.
struct AgentState {
  AgentId id;
  double gamma_request = 0.0;
  double gamma_send = 0.0;
};

// Inputs shared by every decision taken against one pool snapshot.
struct MarketView {
  std::span<const double> loading;
  const PriceMatrix& price;
};

// Receiver shard choice minimizing
//   gamma * f({s}) + (1 - gamma) * E[price | request s, sender ~ v_hat].
// With gamma = 0 this is exactly BestRequestShard.
ShardId ChooseRequestShard(double gamma_request, std::span<const double> v_hat,
                           const MarketView& market, TieBreaker& ties);

struct FeasibleSet {
  ShardSet shards;
  double fee = 0.0;
  // Shards the sender is credited with choosing; see the file comment.
  ShardSet send_shards;
};

// Every S_T containing `request` with |S_T| <= max_cardinality whose shards
// hold at least amount + f(S_T) of the sender's funds. Ordered by lowest
// send shard, then by size, so the first entry for each send shard is the
// smallest set using it.
std::vector<FeasibleSet> FeasibleShardSets(std::span<const double> balances,
                                           ShardId request, double amount,
                                           const MarketView& market,
                                           int max_cardinality);

struct FulfillmentResult {
  bool accepted = false;
  ShardSet shards;
  double fee = 0.0;
  // Lowest shard the sender chose beyond the request shard, or the request
  // shard itself for a single-shard transaction.
  ShardId send_shard;
  std::string reason;
};

// Sender choice over the feasible sets minimizing
//   gamma * f(S_T) + (1 - gamma) * E[price | receiver ~ w_hat, send shards].
// With gamma = 0 and funds everywhere this picks BestSendShard.
FulfillmentResult ChooseSendShards(double gamma_send,
                                   std::span<const double> balances,
                                   std::span<const double> w_hat,
                                   ShardId request, double amount,
                                   const MarketView& market,
                                   int max_cardinality, TieBreaker& ties);

// The feasible set whose funding shards hold the most, ties broken by `ties`.
FulfillmentResult ChooseSendShardsFunded(std::span<const double> balances,
                                         ShardId request, double amount,
                                         const MarketView& market,
                                         int max_cardinality, TieBreaker& ties);

// Uniform draw over the feasible sets, or a rejection when there are none.
FulfillmentResult ChooseSendShardsRandom(std::span<const double> balances,
                                         ShardId request, double amount,
                                         const MarketView& market,
                                         int max_cardinality, Rng& rng);

FulfillmentResult Rejection(std::string reason);

struct Settlement {
  std::vector<double> withdrawals;  // per shard, amount plus fee
  double fee = 0.0;
};

// Moves the transaction amount from sender to receiver (credited in the
// receive shard) and burns the fee. The sender's shards in S_T are drained
// greedily in descending balance order, lowest index first on ties. Throws if
// the sender cannot cover amount plus fee, which means a feasibility check
// was skipped upstream.
Settlement Settle(BalanceSheet& balances, const Transaction& tx);

}  // namespace shardsim

#endif  // SHARDSIM_AGENT_POLICY_H_
