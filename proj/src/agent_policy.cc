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

#include "shardsim/agent_policy.h"

#include <algorithm>
#include <numeric>
#include <utility>

namespace shardsim {
namespace {

// Funding shortfalls below this are rounding in the greedy split.
constexpr double kSettlementSlack = 1e-9;
// Guard on subset enumeration for large max_cardinality.
constexpr double kMaxCandidates = 1 << 20;

double Choose(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

void CheckMarket(const MarketView& market) {
  if (market.loading.size() != static_cast<std::size_t>(market.price.size())) {
    throw ShardsimError("loading vector and price matrix disagree on shards");
  }
}

ShardSet SendShardsOf(ShardSet shards, ShardId request) {
  ShardSet send(shards.bits() & ~(std::uint64_t{1} << request.value()));
  return send.empty() ? ShardSet::Single(request) : send;
}

// Extends `base` with every combination of up to `room` shards drawn from
// [next, m), calling `fn` on each set including `base` itself.
template <typename Fn>
void ForEachSuperset(ShardSet base, int next, int m, int room, Fn&& fn) {
  fn(base);
  if (room == 0) return;
  for (int s = next; s < m; ++s) {
    if (base.Contains(ShardId(s))) continue;
    ShardSet grown = base;
    grown.Insert(ShardId(s));
    ForEachSuperset(grown, s + 1, m, room - 1, fn);
  }
}

FulfillmentResult Accept(const FeasibleSet& set) {
  FulfillmentResult result;
  result.accepted = true;
  result.shards = set.shards;
  result.fee = set.fee;
  result.send_shard = set.send_shards.Shards().front();
  return result;
}

}  // namespace

ShardId ChooseRequestShard(double gamma_request, std::span<const double> v_hat,
                           const MarketView& market, TieBreaker& ties) {
  CheckMarket(market);
  const SquareMatrix& price = market.price.values;
  if (gamma_request == 0.0) return BestRequestShard(price, v_hat, ties);
  if (!(gamma_request >= 0.0 && gamma_request <= 1.0)) {
    throw ShardsimError("gamma_request must lie in [0, 1]");
  }
  const PricingParams& params = market.price.params;
  auto values = price.Apply(v_hat);
  std::vector<double> scores(values.size());
  for (int s = 0; s < static_cast<int>(values.size()); ++s) {
    const double now = Price(ShardSet::Single(ShardId(s)), market.loading, params);
    const double later =
        params.nominal_price + (1.0 - values[s]) * params.max_fee;
    scores[s] = -(gamma_request * now + (1.0 - gamma_request) * later);
  }
  return ShardId(ties.Argmax(scores));
}

std::vector<FeasibleSet> FeasibleShardSets(std::span<const double> balances,
                                           ShardId request, double amount,
                                           const MarketView& market,
                                           int max_cardinality) {
  CheckMarket(market);
  const int m = market.price.size();
  if (static_cast<int>(balances.size()) != m) {
    throw ShardsimError("balance vector does not match shard count");
  }
  if (request.value() < 0 || request.value() >= m) {
    throw ShardsimError("request shard out of range");
  }
  if (max_cardinality < 1) throw ShardsimError("max cardinality must be >= 1");
  const int room = std::min(max_cardinality, m) - 1;
  double candidates = 0.0;
  for (int k = 0; k <= room; ++k) candidates += Choose(m - 1, k);
  if (candidates > kMaxCandidates) {
    throw ShardsimError("too many candidate shard sets; lower max cardinality");
  }

  std::vector<FeasibleSet> out;
  ForEachSuperset(ShardSet::Single(request), 0, m, room, [&](ShardSet set) {
    double funds = 0.0;
    set.ForEach([&](ShardId s) { funds += balances[s.value()]; });
    const double fee = Price(set, market.loading, market.price.params);
    if (funds >= amount + fee) {
      out.push_back(FeasibleSet{set, fee, SendShardsOf(set, request)});
    }
  });
  std::sort(out.begin(), out.end(),
            [](const FeasibleSet& a, const FeasibleSet& b) {
              const int a_first = a.send_shards.Shards().front().value();
              const int b_first = b.send_shards.Shards().front().value();
              if (a_first != b_first) return a_first < b_first;
              if (a.shards.size() != b.shards.size()) {
                return a.shards.size() < b.shards.size();
              }
              return a.shards.bits() < b.shards.bits();
            });
  return out;
}

FulfillmentResult Rejection(std::string reason) {
  FulfillmentResult result;
  result.reason = std::move(reason);
  return result;
}

FulfillmentResult ChooseSendShards(double gamma_send,
                                   std::span<const double> balances,
                                   std::span<const double> w_hat,
                                   ShardId request, double amount,
                                   const MarketView& market,
                                   int max_cardinality, TieBreaker& ties) {
  if (!(gamma_send >= 0.0 && gamma_send <= 1.0)) {
    throw ShardsimError("gamma_send must lie in [0, 1]");
  }
  auto feasible =
      FeasibleShardSets(balances, request, amount, market, max_cardinality);
  if (feasible.empty()) return Rejection("insufficient funds");

  const PricingParams& params = market.price.params;
  const auto column_values = market.price.values.ApplyTransposed(w_hat);
  std::vector<double> scores;
  scores.reserve(feasible.size());
  for (const auto& set : feasible) {
    // w_hat^T P v where v is uniform over the send shards.
    double value = 0.0;
    set.send_shards.ForEach(
        [&](ShardId s) { value += column_values[s.value()]; });
    value /= set.send_shards.size();
    if (gamma_send == 0.0) {
      scores.push_back(value);
    } else {
      const double later = params.nominal_price + (1.0 - value) * params.max_fee;
      scores.push_back(-(gamma_send * set.fee + (1.0 - gamma_send) * later));
    }
  }
  return Accept(feasible[ties.Argmax(scores)]);
}

FulfillmentResult ChooseSendShardsFunded(std::span<const double> balances,
                                         ShardId request, double amount,
                                         const MarketView& market,
                                         int max_cardinality, TieBreaker& ties) {
  auto feasible =
      FeasibleShardSets(balances, request, amount, market, max_cardinality);
  if (feasible.empty()) return Rejection("insufficient funds");
  std::vector<double> held(feasible.size(), 0.0);
  for (std::size_t c = 0; c < feasible.size(); ++c) {
    feasible[c].send_shards.ForEach(
        [&](ShardId s) { held[c] += balances[s.value()]; });
  }
  return Accept(feasible[ties.Argmax(held)]);
}

FulfillmentResult ChooseSendShardsRandom(std::span<const double> balances,
                                         ShardId request, double amount,
                                         const MarketView& market,
                                         int max_cardinality, Rng& rng) {
  auto feasible =
      FeasibleShardSets(balances, request, amount, market, max_cardinality);
  if (feasible.empty()) return Rejection("insufficient funds");
  std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
  return Accept(feasible[pick(rng)]);
}

Settlement Settle(BalanceSheet& balances, const Transaction& tx) {
  const int m = balances.num_shards();
  if (tx.num_shards() != m) {
    throw ShardsimError("transaction shard count does not match balances");
  }
  auto funding = tx.shards().Shards();
  std::stable_sort(funding.begin(), funding.end(), [&](ShardId a, ShardId b) {
    return balances.Get(tx.sender(), a) > balances.Get(tx.sender(), b);
  });

  Settlement settlement;
  settlement.withdrawals.assign(m, 0.0);
  settlement.fee = tx.fee_paid();
  const double needed = tx.total_amount() + tx.fee_paid();
  double available = 0.0;
  for (ShardId s : funding) available += balances.Get(tx.sender(), s);
  if (available + kSettlementSlack < needed) {
    throw ShardsimError("settlement would overdraw sender " +
                        std::to_string(tx.sender().value()));
  }

  double remaining = needed;
  for (ShardId s : funding) {
    if (remaining <= 0.0) break;
    const double held = balances.Get(tx.sender(), s);
    const double draw = std::min(held, remaining);
    balances.Withdraw(tx.sender(), s, draw);
    settlement.withdrawals[s.value()] = draw;
    remaining = draw == held ? remaining - held : 0.0;
  }
  balances.Deposit(tx.receiver(), tx.receive_shard(), tx.total_amount());
  return settlement;
}

}  // namespace shardsim
