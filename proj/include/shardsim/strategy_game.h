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

#ifndef SHARDSIM_STRATEGY_GAME_H_
#define SHARDSIM_STRATEGY_GAME_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "shardsim/pricing.h"
#include "shardsim/types.h"

// The edge game induced by the price matrix P. Each edge (i, j) carries a
// request distribution w (chosen by receiver i) and a send distribution v
// (chosen by sender j); both players on the edge score u = w^T P v, and the
// sum of u over all edges is an exact potential for the game.

namespace shardsim {

using Rng = std::mt19937_64;

// Values within this distance of the maximum count as tied.
inline constexpr double kTieTolerance = 1e-12;

enum class TieBreak { kLowestIndex, kRandom };

// Picks among tied maxima. The random mode draws from its own seeded stream
// so that enabling it does not perturb other random draws.
class TieBreaker {
 public:
  TieBreaker() = default;
  TieBreaker(TieBreak mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

  TieBreak mode() const { return mode_; }

  // Index of the maximum of `values`, treating entries within kTieTolerance
  // of it as tied: the lowest tied index, or a uniform draw among the tied
  // entries in random mode.
  int Argmax(std::span<const double> values);

 private:
  TieBreak mode_ = TieBreak::kLowestIndex;
  Rng rng_{0};
};

std::vector<double> PureStrategy(int num_shards, ShardId shard);
std::vector<double> UniformStrategy(int num_shards);

struct EdgeStrategy {
  std::vector<double> request;  // w, receiver side
  std::vector<double> send;     // v, sender side
};

// Pure best response of the receiver to a sender estimate: the shard
// maximizing (P v_hat)_s, lowest index on ties.
ShardId BestRequestShard(const SquareMatrix& price, std::span<const double> v_hat,
                         TieBreaker& ties);
ShardId BestRequestShard(const SquareMatrix& price,
                         std::span<const double> v_hat);
// Pure best response of the sender: the shard maximizing (w_hat^T P)_t.
ShardId BestSendShard(const SquareMatrix& price, std::span<const double> w_hat,
                      TieBreaker& ties);
ShardId BestSendShard(const SquareMatrix& price,
                      std::span<const double> w_hat);

// The same responses as distributions (unit vectors).
std::vector<double> BestResponseRequest(const SquareMatrix& price,
                                        std::span<const double> v_hat);
std::vector<double> BestResponseSend(const SquareMatrix& price,
                                     std::span<const double> w_hat);

// Uniform mixture over every vertex tied for the maximum of `values`.
std::vector<double> UniformOverMaxima(std::span<const double> values);
// Maximizer of w^T P v_hat over the simplex, reported as the uniform mixture
// of all optimal vertices.
std::vector<double> MixedBestResponse(const SquareMatrix& price,
                                      std::span<const double> v_hat);
std::vector<double> MixedBestResponseSend(const SquareMatrix& price,
                                          std::span<const double> w_hat);

// Normalized histogram of a neighbour's observed shard choices plus a
// pseudo-count prior.
class EmpiricalEstimate {
 public:
  EmpiricalEstimate() = default;
  explicit EmpiricalEstimate(int num_shards, double prior_per_shard = 1.0);
  explicit EmpiricalEstimate(std::vector<double> prior);

  void Observe(ShardId shard);

  int num_shards() const { return static_cast<int>(counts_.size()); }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::span<const double> prior() const { return prior_; }
  std::int64_t observations() const { return observations_; }

  std::vector<double> Estimate() const;
  // Largest entry of the estimate.
  double TopMass() const;

 private:
  std::vector<std::int64_t> counts_;
  std::vector<double> prior_;
  std::int64_t observations_ = 0;
  double prior_total_ = 0.0;
};

// Returns `est` with one more observation of `shard`.
EmpiricalEstimate UpdateEstimate(EmpiricalEstimate est, ShardId shard);

double EdgeUtility(const EdgeStrategy& edge, const SquareMatrix& price);
double Potential(std::span<const EdgeStrategy> strategies,
                 const SquareMatrix& price);

// Per-edge utilities and their sum for a fixed matrix.
class PotentialState {
 public:
  PotentialState(std::vector<EdgeStrategy> strategies, SquareMatrix price);

  const std::vector<EdgeStrategy>& strategies() const { return strategies_; }
  const SquareMatrix& price() const { return price_; }
  std::span<const double> utilities() const { return utilities_; }
  double potential() const { return potential_; }

  // Replaces one side of one edge and updates the cached sums.
  void SetRequest(std::size_t edge, std::vector<double> request);
  void SetSend(std::size_t edge, std::vector<double> send);

 private:
  void Refresh(std::size_t edge);

  std::vector<EdgeStrategy> strategies_;
  SquareMatrix price_;
  std::vector<double> utilities_;
  double potential_ = 0.0;
};

enum class StrategySide { kNone, kRequest, kSend };

struct PotentialStep {
  std::size_t edge = 0;
  StrategySide side = StrategySide::kNone;
  double delta_potential = 0.0;
  double delta_utility = 0.0;
};

// Compares two profiles that differ in at most one side of one edge and
// returns the change in the potential (recomputed from scratch over all
// edges) next to the change in the deviating edge's utility. Utilities are
// evaluated with `utility_matrix`, which is the potential matrix unless a
// caller deliberately substitutes another one. Throws if more than one side
// changed or the profiles have different shapes.
PotentialStep VerifyPotentialStep(std::span<const EdgeStrategy> before,
                                  std::span<const EdgeStrategy> after,
                                  const SquareMatrix& potential_matrix,
                                  const SquareMatrix& utility_matrix);
PotentialStep VerifyPotentialStep(std::span<const EdgeStrategy> before,
                                  std::span<const EdgeStrategy> after,
                                  const SquareMatrix& price);

struct DynamicsTrace {
  std::vector<double> potentials;  // H before the first sweep, then per sweep
  int sweeps = 0;
  bool converged = false;
};

// Asynchronous pure best-response sweeps with P held fixed. In each sweep
// every edge's receiver and then sender best-respond to the other side's
// current strategy; a side only moves on strict improvement. Stops at the
// first sweep that changes nothing.
DynamicsTrace RunBestResponseDynamics(std::vector<EdgeStrategy>& strategies,
                                      const SquareMatrix& price,
                                      int max_sweeps);

}  // namespace shardsim

#endif  // SHARDSIM_STRATEGY_GAME_H_
