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
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "shardsim/strategy_game.h"

namespace shardsim {
namespace {

SquareMatrix PriceFor(std::vector<double> loading, double alpha) {
  PricingParams p;
  p.alpha = alpha;
  return BuildPriceMatrix(loading, p).values;
}

std::vector<double> RandomSimplex(int m, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> out(m);
  double total = 0.0;
  for (double& x : out) total += (x = e(rng));
  for (double& x : out) x /= total;
  return out;
}

std::vector<double> RandomLoading(int m, std::mt19937_64& rng) {
  return LoadingFromUsage(RandomSimplex(m, rng));
}

// Exhaustive search over the m vertices, lowest index on exact ties.
int VertexSearch(const SquareMatrix& p, const std::vector<double>& v) {
  int best = 0;
  double best_value = -1.0;
  for (int s = 0; s < p.size(); ++s) {
    double value = 0.0;
    for (int t = 0; t < p.size(); ++t) value += p(s, t) * v[t];
    if (value > best_value + 1e-12) {
      best_value = value;
      best = s;
    }
  }
  return best;
}

TEST_CASE("best request shard examples") {
  const auto ones = PriceFor(std::vector<double>(4, 0.0), 0.0);
  CHECK(BestResponseRequest(ones, UniformStrategy(4)) ==
        PureStrategy(4, ShardId(0)));
  const auto p1 = PriceFor(std::vector<double>(4, 0.0), 1.0);
  CHECK(BestRequestShard(p1, PureStrategy(4, ShardId(2))) == ShardId(2));

  // Against a pure estimate the diagonal always wins: 1 - l_t beats
  // (1 - l_s - l_t) / 2 however heavy t is.
  const auto heavy = PriceFor({0.0, 0.0, 0.75, 0.0}, 1.0);
  CHECK(BestRequestShard(heavy, PureStrategy(4, ShardId(2))) == ShardId(2));
  // Split between shards 0 and 2, the loaded one loses:
  // row 0 = 0.5 + 0.5 * 0.125, row 2 = 0.5 * 0.125 + 0.5 * 0.25.
  const std::vector<double> split{0.5, 0.0, 0.5, 0.0};
  CHECK(BestRequestShard(heavy, split) == ShardId(0));
  CHECK(heavy.Apply(split)[0] == doctest::Approx(0.5625));
  CHECK(heavy.Apply(split)[2] == doctest::Approx(0.1875));
}

TEST_CASE("best response matches exhaustive vertex search") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = 1 + trial % 8;
    const auto p = PriceFor(RandomLoading(m, rng), (trial % 4) * 0.5);
    const auto v = RandomSimplex(m, rng);
    CHECK(BestRequestShard(p, v).value() == VertexSearch(p, v));
    CHECK(BestSendShard(p, v).value() == VertexSearch(p, v));
  }
}

TEST_CASE("best send shard examples") {
  const auto p1 = PriceFor(std::vector<double>(4, 0.0), 1.0);
  CHECK(BestSendShard(p1, PureStrategy(4, ShardId(1))) == ShardId(1));
  const auto skew = PriceFor({0, 0.25, 0.25, 0}, 1.0);
  // Column sums: shards 0 and 3 tie at the top.
  CHECK(BestSendShard(skew, UniformStrategy(4)) == ShardId(0));
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = PriceFor(RandomLoading(5, rng), 0.3);
    const auto est = RandomSimplex(5, rng);
    CHECK(BestSendShard(p, est) == BestRequestShard(p, est));
  }
}

TEST_CASE("mixed best response") {
  const auto p1 = PriceFor(std::vector<double>(4, 0.0), 1.0);
  CHECK(MixedBestResponse(p1, PureStrategy(4, ShardId(3))) ==
        PureStrategy(4, ShardId(3)));
  const auto ones = PriceFor(std::vector<double>(4, 0.0), 0.0);
  CHECK(MixedBestResponse(ones, UniformStrategy(4)) == UniformStrategy(4));
  const auto skew = PriceFor({0, 0.25, 0.25, 0}, 1.0);
  CHECK(MixedBestResponseSend(skew, UniformStrategy(4)) ==
        std::vector<double>{0.5, 0, 0, 0.5});
  // Symmetric loading on shards 2, 3 of three: request from shard 0 or 1.
  const auto pair = PriceFor({0, 0, 1.0 / 3, 1.0 / 3}, 1.0);
  const auto mixed = MixedBestResponse(pair, UniformStrategy(4));
  CHECK(mixed == std::vector<double>{0.5, 0.5, 0, 0});
  const auto values = pair.Apply(UniformStrategy(4));
  CHECK(pair.Bilinear(mixed, UniformStrategy(4)) ==
        doctest::Approx(*std::max_element(values.begin(), values.end())));
}

TEST_CASE("tie breaker") {
  const std::vector<double> values{0.5, 1.0, 0.2, 1.0, 1.0 - 1e-13};
  TieBreaker lowest;
  CHECK(lowest.Argmax(values) == 1);
  TieBreaker a(TieBreak::kRandom, 9), b(TieBreak::kRandom, 9);
  std::set<int> seen;
  for (int k = 0; k < 200; ++k) {
    const int pick = a.Argmax(values);
    CHECK(pick == b.Argmax(values));
    seen.insert(pick);
  }
  CHECK(seen == std::set<int>{1, 3, 4});
  CHECK(a.Argmax(std::vector<double>{0.0, 2.0}) == 1);
  CHECK_THROWS_AS(lowest.Argmax(std::vector<double>{}), ShardsimError);
}

TEST_CASE("empirical estimate") {
  EmpiricalEstimate est(4);
  CHECK(est.Estimate() == UniformStrategy(4));
  for (int k = 0; k < 3; ++k) est = UpdateEstimate(est, ShardId(2));
  const auto e = est.Estimate();
  CHECK(e[0] == doctest::Approx(1.0 / 7));
  CHECK(e[2] == doctest::Approx(4.0 / 7));
  CHECK(est.TopMass() == doctest::Approx(4.0 / 7));

  EmpiricalEstimate bare(std::vector<double>(4, 0.0));
  for (int k = 0; k < 5; ++k) bare.Observe(ShardId(1));
  CHECK(bare.Estimate() == PureStrategy(4, ShardId(1)));
  CHECK(EmpiricalEstimate(std::vector<double>(3, 0.0)).Estimate() ==
        UniformStrategy(3));
  CHECK_THROWS_AS(est.Observe(ShardId(4)), ShardsimError);
  CHECK_THROWS_AS(EmpiricalEstimate(std::vector<double>{1.0, -1.0}),
                  ShardsimError);

  std::mt19937_64 rng(4);
  EmpiricalEstimate walk(6, 0.5);
  for (int k = 0; k < 1000; ++k) {
    walk.Observe(ShardId(static_cast<int>(rng() % 6)));
    CHECK(OnSimplex(walk.Estimate()));
  }
}

TEST_CASE("potential examples") {
  const auto p1 = PriceFor(std::vector<double>(4, 0.0), 1.0);
  const auto e = [](int s) { return PureStrategy(4, ShardId(s)); };
  std::vector<EdgeStrategy> one{{e(2), e(2)}};
  CHECK(Potential(one, p1) == 1.0);
  std::vector<EdgeStrategy> halves{{e(0), e(1)}, {e(2), e(3)}};
  CHECK(Potential(halves, p1) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<EdgeStrategy> ring{{e(0), e(0)}, {e(1), e(1)}, {e(2), e(2)},
                                 {e(3), e(3)}};
  CHECK(Potential(ring, p1) == 4.0);

  PotentialState state(ring, p1);
  CHECK(state.potential() == 4.0);
  state.SetSend(1, e(0));
  CHECK(state.potential() == doctest::Approx(Potential(state.strategies(), p1)));
  CHECK(state.utilities()[1] == doctest::Approx(0.5));
}

TEST_CASE("potential step examples") {
  const auto p1 = PriceFor(std::vector<double>(4, 0.0), 1.0);
  const auto e = [](int s) { return PureStrategy(4, ShardId(s)); };
  std::vector<EdgeStrategy> before{{e(1), e(2)}, {e(0), e(0)}};
  auto noop = VerifyPotentialStep(before, before, p1);
  CHECK(noop.delta_potential == 0.0);
  CHECK(noop.delta_utility == 0.0);
  CHECK(noop.side == StrategySide::kNone);

  auto after = before;
  after[0].request = e(2);
  auto step = VerifyPotentialStep(before, after, p1);
  CHECK(step.edge == 0);
  CHECK(step.side == StrategySide::kRequest);
  CHECK(step.delta_potential == doctest::Approx(0.5));
  CHECK(step.delta_utility == doctest::Approx(0.5));

  after[1].send = e(3);
  CHECK_THROWS_AS(VerifyPotentialStep(before, after, p1), ShardsimError);
}

TEST_CASE("potential identity on random unilateral changes") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + trial % 7;
    const auto p = PriceFor(RandomLoading(m, rng), (trial % 5) * 0.4);
    std::vector<EdgeStrategy> before(1 + trial % 6);
    for (auto& edge : before) {
      edge.request = RandomSimplex(m, rng);
      edge.send = RandomSimplex(m, rng);
    }
    auto after = before;
    const std::size_t k = rng() % before.size();
    if (trial % 2 == 0) {
      after[k].request = RandomSimplex(m, rng);
    } else {
      after[k].send = RandomSimplex(m, rng);
    }
    const auto step = VerifyPotentialStep(before, after, p);
    CHECK(std::abs(step.delta_potential - step.delta_utility) <= 1e-12);
  }
}

TEST_CASE("a sign-flipped utility matrix breaks the identity") {
  std::mt19937_64 rng(8);
  const auto p = PriceFor(RandomLoading(3, rng), 0.5);
  auto flipped = p;
  flipped(0, 2) = -flipped(0, 2);
  std::vector<EdgeStrategy> before{{UniformStrategy(3), UniformStrategy(3)}};
  auto after = before;
  after[0].send = PureStrategy(3, ShardId(2));
  const auto step = VerifyPotentialStep(before, after, p, flipped);
  CHECK(std::abs(step.delta_potential - step.delta_utility) > 1e-3);
}

TEST_CASE("best response dynamics climb to a fixed point") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 7;
    const auto p = PriceFor(RandomLoading(m, rng), (trial % 3) * 0.5);
    std::vector<EdgeStrategy> strategies(20);
    for (auto& edge : strategies) {
      edge.request = RandomSimplex(m, rng);
      edge.send = RandomSimplex(m, rng);
    }
    const auto trace = RunBestResponseDynamics(strategies, p, 10);
    CHECK(trace.converged);
    for (std::size_t k = 1; k < trace.potentials.size(); ++k) {
      CHECK(trace.potentials[k] >= trace.potentials[k - 1] - 1e-12);
    }
    // At the fixed point no side can improve.
    for (const auto& edge : strategies) {
      const auto rows = p.Apply(edge.send);
      CHECK(p.Bilinear(edge.request, edge.send) >=
            *std::max_element(rows.begin(), rows.end()) - 1e-12);
    }
  }
}

}  // namespace
}  // namespace shardsim
