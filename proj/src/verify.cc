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

#include "shardsim/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shardsim/ledger.h"
#include "shardsim/pricing.h"
#include "shardsim/strategy_game.h"

namespace shardsim {
namespace {

// Per-check stream salts, so adding trials to one check leaves the others'
// instances unchanged.
constexpr std::uint64_t kIdentitySalt = 0x11;
constexpr std::uint64_t kVertexSalt = 0x22;
constexpr std::uint64_t kConvergenceSalt = 0x33;
constexpr std::uint64_t kPoolSalt = 0x44;
constexpr std::uint64_t kPricingSalt = 0x55;

Rng StreamFor(const VerifyOptions& options, std::uint64_t salt) {
  std::seed_seq seq{options.seed, salt};
  return Rng(seq);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double UniformReal(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int DrawShards(const VerifyOptions& options, Rng& rng, int lo, int hi) {
  return options.num_shards > 0 ? options.num_shards : UniformInt(rng, lo, hi);
}

// A point on the simplex: a vertex, a sparse mixture or a dense one.
std::vector<double> RandomSimplex(int m, Rng& rng) {
  std::vector<double> out(m, 0.0);
  const int kind = UniformInt(rng, 0, 3);
  if (kind == 0) {
    out[UniformInt(rng, 0, m - 1)] = 1.0;
    return out;
  }
  std::exponential_distribution<double> gamma1(1.0);
  double total = 0.0;
  for (int s = 0; s < m; ++s) {
    if (kind == 1 && UniformInt(rng, 0, 1) == 0) continue;
    out[s] = gamma1(rng);
    total += out[s];
  }
  if (total == 0.0) {
    out[UniformInt(rng, 0, m - 1)] = 1.0;
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

std::vector<double> RandomLoading(int m, Rng& rng) {
  return LoadingFromUsage(RandomSimplex(m, rng));
}

double RandomAlpha(Rng& rng) {
  switch (UniformInt(rng, 0, 3)) {
    case 0:
      return 0.0;
    case 1:
      return 1.0;
    case 2:
      return UniformReal(rng, 0.0, 0.01);
    default:
      return UniformReal(rng, 0.0, 3.0);
  }
}

SquareMatrix RandomPriceMatrix(int m, Rng& rng) {
  PricingParams params;
  params.alpha = RandomAlpha(rng);
  return BuildPriceMatrix(RandomLoading(m, rng), params).values;
}

std::string Format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Brute-force pool metrics read straight off the amount vectors.
struct PoolOracle {
  std::vector<std::int64_t> counts;
  std::int64_t usages = 0;
  std::vector<double> usage;
  std::vector<double> loading;
  double mean_cardinality = 0.0;
};

PoolOracle Recount(const std::vector<Transaction>& txs, int m) {
  PoolOracle o;
  o.counts.assign(m, 0);
  std::int64_t cardinality_total = 0;
  for (const auto& tx : txs) {
    int k = 0;
    for (int s = 0; s < m; ++s) {
      if (tx.amounts()[s] > 0.0) {
        ++o.counts[s];
        ++k;
      }
    }
    cardinality_total += k;
  }
  for (auto c : o.counts) o.usages += c;
  o.usage.assign(m, 0.0);
  o.loading.assign(m, 0.0);
  for (int s = 0; s < m; ++s) {
    if (o.usages > 0) {
      o.usage[s] = static_cast<double>(o.counts[s]) / o.usages;
      o.loading[s] = std::max(0.0, o.usage[s] - 1.0 / m);
    }
  }
  if (!txs.empty()) {
    o.mean_cardinality =
        static_cast<double>(cardinality_total) / static_cast<double>(txs.size());
  }
  return o;
}

Transaction RandomTransaction(int m, Rng& rng) {
  const int k = UniformInt(rng, 1, std::min(m, 4));
  std::vector<int> shards(m);
  for (int s = 0; s < m; ++s) shards[s] = s;
  std::shuffle(shards.begin(), shards.end(), rng);
  ShardSet set;
  for (int i = 0; i < k; ++i) set.Insert(ShardId(shards[i]));
  return Transaction::FromShardSet(AgentId(0), AgentId(1), ShardId(shards[0]),
                                   set, m, UniformReal(rng, 1.0, 100.0), 0.0);
}

}  // namespace

PropertyResult CheckPotentialIdentity(const VerifyOptions& options) {
  PropertyResult result{"potential_identity", true, ""};
  Rng rng = StreamFor(options, kIdentitySalt);
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < options.identity_trials; ++trial) {
    const int m = DrawShards(options, rng, 2, 8);
    const SquareMatrix price = RandomPriceMatrix(m, rng);
    SquareMatrix utility = price;
    if (options.inject_fault) utility(0, m - 1) = -utility(0, m - 1);

    std::vector<EdgeStrategy> before(UniformInt(rng, 1, 8));
    for (auto& e : before) {
      e.request = RandomSimplex(m, rng);
      e.send = RandomSimplex(m, rng);
    }
    auto after = before;
    const std::size_t edge = UniformInt(rng, 0, static_cast<int>(before.size()) - 1);
    if (UniformInt(rng, 0, 1) == 0) {
      after[edge].request = RandomSimplex(m, rng);
    } else {
      after[edge].send = RandomSimplex(m, rng);
    }
    const PotentialStep step =
        VerifyPotentialStep(before, after, price, utility);
    const double gap = std::abs(step.delta_potential - step.delta_utility);
    worst = std::max(worst, gap);
    if (gap > kIdentityTolerance) ++failures;
  }
  result.passed = failures == 0;
  result.detail = Format("%d trials, %d violations, max |dH - du| = %.3g",
                         options.identity_trials, failures, worst);
  return result;
}

PropertyResult CheckVertexOptimality(const VerifyOptions& options) {
  PropertyResult result{"vertex_optimality", true, ""};
  Rng rng = StreamFor(options, kVertexSalt);
  int beaten = 0;
  int off_vertex = 0;
  double worst_excess = -1.0;
  for (int trial = 0; trial < options.vertex_instances; ++trial) {
    const int m = DrawShards(options, rng, 2, 8);
    const SquareMatrix price = RandomPriceMatrix(m, rng);
    const auto v_hat = RandomSimplex(m, rng);
    const auto values = price.Apply(v_hat);
    const double vertex_max = *std::max_element(values.begin(), values.end());
    const ShardId best = BestRequestShard(price, v_hat);
    const double br_value = price.Bilinear(PureStrategy(m, best), v_hat);
    if (std::abs(br_value - vertex_max) > kIdentityTolerance) ++off_vertex;
    for (int sample = 0; sample < options.vertex_samples; ++sample) {
      const double mixed = price.Bilinear(RandomSimplex(m, rng), v_hat);
      worst_excess = std::max(worst_excess, mixed - br_value);
      if (mixed > br_value + kIdentityTolerance) ++beaten;
    }
  }
  result.passed = beaten == 0 && off_vertex == 0;
  result.detail = Format(
      "%d instances x %d samples, %d beaten, %d off-vertex, max excess %.3g",
      options.vertex_instances, options.vertex_samples, beaten, off_vertex,
      worst_excess);
  return result;
}

PropertyResult CheckMonotoneConvergence(const VerifyOptions& options) {
  PropertyResult result{"monotone_convergence", true, ""};
  Rng rng = StreamFor(options, kConvergenceSalt);
  int decreasing = 0;
  int unconverged = 0;
  int most_sweeps = 0;
  for (int trial = 0; trial < options.convergence_trials; ++trial) {
    const int n = UniformInt(rng, 2, 50);
    const int m = DrawShards(options, rng, 2, 8);
    const int max_edges = n * (n - 1);
    const int target = UniformInt(rng, 1, std::min(3 * n, max_edges));
    std::set<std::pair<int, int>> pairs;
    while (static_cast<int>(pairs.size()) < target) {
      const int i = UniformInt(rng, 0, n - 1);
      const int j = UniformInt(rng, 0, n - 1);
      if (i != j) pairs.emplace(i, j);
    }
    std::vector<EdgeStrategy> strategies(pairs.size());
    for (auto& e : strategies) {
      e.request = RandomSimplex(m, rng);
      e.send = RandomSimplex(m, rng);
    }
    const SquareMatrix price = RandomPriceMatrix(m, rng);
    const DynamicsTrace trace =
        RunBestResponseDynamics(strategies, price, options.convergence_sweeps);
    for (std::size_t k = 1; k < trace.potentials.size(); ++k) {
      if (trace.potentials[k] < trace.potentials[k - 1] - kIdentityTolerance) {
        ++decreasing;
        break;
      }
    }
    if (!trace.converged) ++unconverged;
    most_sweeps = std::max(most_sweeps, trace.sweeps);
  }
  result.passed = decreasing == 0 && unconverged == 0;
  result.detail = Format(
      "%d networks, %d with a decrease, %d not at a fixed point within %d "
      "sweeps, at most %d sweeps used",
      options.convergence_trials, decreasing, unconverged,
      options.convergence_sweeps, most_sweeps);
  return result;
}

PropertyResult CheckMetricOracle(const VerifyOptions& options) {
  PropertyResult result{"metric_oracle", true, ""};
  Rng rng = StreamFor(options, kPoolSalt);
  int count_mismatches = 0;
  int metric_mismatches = 0;
  double worst = 0.0;
  auto compare = [&](double got, double want) {
    const double gap = std::abs(got - want);
    worst = std::max(worst, gap);
    if (gap > kIdentityTolerance) ++metric_mismatches;
  };
  for (int trial = 0; trial < options.pool_trials; ++trial) {
    const int m = DrawShards(options, rng, 1, 16);
    TransactionPool pool(m);
    std::vector<Transaction> mirror;
    const int appends = UniformInt(rng, 0, 200);
    for (int a = 0; a < appends; ++a) {
      // Occasionally reset, as a block cut would.
      if (UniformInt(rng, 0, 99) == 0) {
        pool.Reset();
        mirror.clear();
      }
      Transaction tx = RandomTransaction(m, rng);
      mirror.push_back(tx);
      pool.Append(std::move(tx));
    }
    const PoolOracle oracle = Recount(mirror, m);
    const auto counts = pool.per_shard_counts();
    if (!std::equal(counts.begin(), counts.end(), oracle.counts.begin()) ||
        pool.total_usages() != oracle.usages || pool.size() != mirror.size()) {
      ++count_mismatches;
    }
    const auto usage = ShardUsage(pool);
    const auto loading = ShardLoading(pool);
    double loading_sum = 0.0;
    for (int s = 0; s < m; ++s) {
      compare(usage[s], oracle.usage[s]);
      compare(loading[s], oracle.loading[s]);
      loading_sum += oracle.loading[s];
    }
    compare(ShardBalance(pool, ShardSet::All(m)), 1.0 - loading_sum);
    compare(MeanCardinality(pool), oracle.mean_cardinality);
    if (!mirror.empty()) {
      compare(PoolEfficiency(pool),
              (1.0 - loading_sum) / oracle.mean_cardinality);
      const Transaction& tx = mirror[UniformInt(
          rng, 0, static_cast<int>(mirror.size()) - 1)];
      double tx_balance = 1.0;
      int k = 0;
      for (int s = 0; s < m; ++s) {
        if (tx.amounts()[s] > 0.0) {
          tx_balance -= oracle.loading[s];
          ++k;
        }
      }
      compare(TransactionEfficiency(tx, pool), tx_balance / k);
    }
  }
  result.passed = count_mismatches == 0 && metric_mismatches == 0;
  result.detail = Format(
      "%d pools, %d count mismatches, %d metric mismatches, max gap %.3g",
      options.pool_trials, count_mismatches, metric_mismatches, worst);
  return result;
}

PropertyResult CheckExpectedCardinality(const VerifyOptions& options) {
  PropertyResult result{"expected_cardinality", true, ""};
  const int lo = options.num_shards > 0 ? options.num_shards : 1;
  const int hi =
      options.num_shards > 0 ? options.num_shards : options.max_cardinality_shards;
  double worst = 0.0;
  for (int m = lo; m <= hi; ++m) {
    const auto uniform = UniformStrategy(m);
    const double bilinear =
        ExpectedCardinalityMatrix(m).Bilinear(uniform, uniform);
    double enumerated = 0.0;
    for (int s = 0; s < m; ++s) {
      for (int t = 0; t < m; ++t) enumerated += (s == t ? 1.0 : 2.0);
    }
    enumerated /= static_cast<double>(m) * m;
    const double closed = 2.0 - 1.0 / m;
    worst = std::max({worst, std::abs(bilinear - enumerated),
                      std::abs(bilinear - closed)});
  }
  result.passed = worst <= kIdentityTolerance;
  result.detail = Format("m = %d..%d, max gap %.3g", lo, hi, worst);
  return result;
}

PropertyResult CheckPricingConsistency(const VerifyOptions& options) {
  PropertyResult result{"pricing_consistency", true, ""};
  Rng rng = StreamFor(options, kPricingSalt);
  int mismatches = 0;
  double worst = 0.0;
  for (int trial = 0; trial < options.pricing_trials; ++trial) {
    const int m = DrawShards(options, rng, 1, 8);
    PricingParams params;
    params.nominal_price = UniformInt(rng, 0, 1) == 0 ? 0.0 : UniformReal(rng, 0.0, 2.0);
    params.max_fee = UniformReal(rng, 0.0, 5.0);
    params.alpha = RandomAlpha(rng);
    const auto loading = RandomLoading(m, rng);
    const PriceMatrix price = BuildPriceMatrix(loading, params);
    const double scale = std::max(1.0, params.nominal_price + params.max_fee);
    for (int s = 0; s < m; ++s) {
      for (int t = 0; t < m; ++t) {
        const double expected = ExpectedPrice(PureStrategy(m, ShardId(s)),
                                              PureStrategy(m, ShardId(t)), price);
        const double realized =
            Price(ShardSet{s, t}, loading, params);
        const double gap = std::abs(expected - realized);
        worst = std::max(worst, gap);
        if (gap > kIdentityTolerance * scale) ++mismatches;
      }
    }
  }
  result.passed = mismatches == 0;
  result.detail = Format("%d matrices, all shard pairs, %d mismatches, max gap %.3g",
                         options.pricing_trials, mismatches, worst);
  return result;
}

std::vector<PropertyResult> RunPropertySuites(const VerifyOptions& options) {
  return {CheckPotentialIdentity(options),  CheckVertexOptimality(options),
          CheckMonotoneConvergence(options), CheckMetricOracle(options),
          CheckExpectedCardinality(options), CheckPricingConsistency(options)};
}

}  // namespace shardsim
