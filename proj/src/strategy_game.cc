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

#include "shardsim/strategy_game.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace shardsim {
namespace {

// Lowest index among the entries within kTieTolerance of the maximum.
// Algebraically equal values (e.g. the alpha = 0 single- vs cross-shard tie)
// can differ in the last bits, so exact comparison would let rounding pick.
int LowestArgmax(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  for (int s = 0; s < static_cast<int>(values.size()); ++s) {
    if (values[s] >= top - kTieTolerance) return s;
  }
  return 0;
}

void CheckShape(const EdgeStrategy& edge, int m) {
  if (static_cast<int>(edge.request.size()) != m ||
      static_cast<int>(edge.send.size()) != m) {
    throw ShardsimError("edge strategy does not match matrix size " +
                        std::to_string(m));
  }
}

}  // namespace

int TieBreaker::Argmax(std::span<const double> values) {
  if (values.empty()) throw ShardsimError("argmax of an empty vector");
  if (mode_ == TieBreak::kLowestIndex) return LowestArgmax(values);
  const double top = *std::max_element(values.begin(), values.end());
  std::vector<int> tied;
  for (int s = 0; s < static_cast<int>(values.size()); ++s) {
    if (values[s] >= top - kTieTolerance) tied.push_back(s);
  }
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng_)];
}

std::vector<double> PureStrategy(int num_shards, ShardId shard) {
  if (shard.value() < 0 || shard.value() >= num_shards) {
    throw ShardsimError("shard out of range for pure strategy");
  }
  std::vector<double> out(num_shards, 0.0);
  out[shard.value()] = 1.0;
  return out;
}

std::vector<double> UniformStrategy(int num_shards) {
  if (num_shards < 1) throw ShardsimError("shard count must be >= 1");
  return std::vector<double>(num_shards, 1.0 / num_shards);
}

ShardId BestRequestShard(const SquareMatrix& price,
                         std::span<const double> v_hat, TieBreaker& ties) {
  return ShardId(ties.Argmax(price.Apply(v_hat)));
}

ShardId BestRequestShard(const SquareMatrix& price,
                         std::span<const double> v_hat) {
  return ShardId(LowestArgmax(price.Apply(v_hat)));
}

ShardId BestSendShard(const SquareMatrix& price, std::span<const double> w_hat,
                      TieBreaker& ties) {
  return ShardId(ties.Argmax(price.ApplyTransposed(w_hat)));
}

ShardId BestSendShard(const SquareMatrix& price,
                      std::span<const double> w_hat) {
  return ShardId(LowestArgmax(price.ApplyTransposed(w_hat)));
}

std::vector<double> BestResponseRequest(const SquareMatrix& price,
                                        std::span<const double> v_hat) {
  return PureStrategy(price.size(), BestRequestShard(price, v_hat));
}

std::vector<double> BestResponseSend(const SquareMatrix& price,
                                     std::span<const double> w_hat) {
  return PureStrategy(price.size(), BestSendShard(price, w_hat));
}

std::vector<double> UniformOverMaxima(std::span<const double> values) {
  if (values.empty()) throw ShardsimError("empty value vector");
  const double top = *std::max_element(values.begin(), values.end());
  std::vector<double> out(values.size(), 0.0);
  int tied = 0;
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (values[s] >= top - kTieTolerance) {
      out[s] = 1.0;
      ++tied;
    }
  }
  for (double& p : out) p /= tied;
  return out;
}

std::vector<double> MixedBestResponse(const SquareMatrix& price,
                                      std::span<const double> v_hat) {
  return UniformOverMaxima(price.Apply(v_hat));
}

std::vector<double> MixedBestResponseSend(const SquareMatrix& price,
                                          std::span<const double> w_hat) {
  return UniformOverMaxima(price.ApplyTransposed(w_hat));
}

EmpiricalEstimate::EmpiricalEstimate(int num_shards, double prior_per_shard)
    : EmpiricalEstimate(std::vector<double>(num_shards, prior_per_shard)) {}

EmpiricalEstimate::EmpiricalEstimate(std::vector<double> prior)
    : counts_(prior.size(), 0), prior_(std::move(prior)) {
  if (prior_.empty()) throw ShardsimError("estimate needs at least one shard");
  for (double p : prior_) {
    if (!(p >= 0.0)) throw ShardsimError("prior pseudo-counts must be >= 0");
    prior_total_ += p;
  }
}

void EmpiricalEstimate::Observe(ShardId shard) {
  if (shard.value() < 0 || shard.value() >= num_shards()) {
    throw ShardsimError("observed shard out of range");
  }
  ++counts_[shard.value()];
  ++observations_;
}

std::vector<double> EmpiricalEstimate::Estimate() const {
  const double total = prior_total_ + static_cast<double>(observations_);
  // Nothing observed and no prior: fall back to uniform.
  if (total <= 0.0) return UniformStrategy(num_shards());
  std::vector<double> out(counts_.size());
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    out[s] = (static_cast<double>(counts_[s]) + prior_[s]) / total;
  }
  return out;
}

double EmpiricalEstimate::TopMass() const {
  auto est = Estimate();
  return *std::max_element(est.begin(), est.end());
}

EmpiricalEstimate UpdateEstimate(EmpiricalEstimate est, ShardId shard) {
  est.Observe(shard);
  return est;
}

double EdgeUtility(const EdgeStrategy& edge, const SquareMatrix& price) {
  CheckShape(edge, price.size());
  return price.Bilinear(edge.request, edge.send);
}

double Potential(std::span<const EdgeStrategy> strategies,
                 const SquareMatrix& price) {
  double total = 0.0;
  for (const auto& edge : strategies) total += EdgeUtility(edge, price);
  return total;
}

PotentialState::PotentialState(std::vector<EdgeStrategy> strategies,
                               SquareMatrix price)
    : strategies_(std::move(strategies)),
      price_(std::move(price)),
      utilities_(strategies_.size(), 0.0) {
  for (std::size_t e = 0; e < strategies_.size(); ++e) {
    utilities_[e] = EdgeUtility(strategies_[e], price_);
  }
  potential_ = std::accumulate(utilities_.begin(), utilities_.end(), 0.0);
}

void PotentialState::SetRequest(std::size_t edge, std::vector<double> request) {
  strategies_.at(edge).request = std::move(request);
  Refresh(edge);
}

void PotentialState::SetSend(std::size_t edge, std::vector<double> send) {
  strategies_.at(edge).send = std::move(send);
  Refresh(edge);
}

void PotentialState::Refresh(std::size_t edge) {
  const double updated = EdgeUtility(strategies_[edge], price_);
  potential_ += updated - utilities_[edge];
  utilities_[edge] = updated;
}

PotentialStep VerifyPotentialStep(std::span<const EdgeStrategy> before,
                                  std::span<const EdgeStrategy> after,
                                  const SquareMatrix& potential_matrix,
                                  const SquareMatrix& utility_matrix) {
  if (before.size() != after.size()) {
    throw ShardsimError("strategy profiles have different edge counts");
  }
  PotentialStep step;
  int changed = 0;
  for (std::size_t e = 0; e < before.size(); ++e) {
    CheckShape(before[e], potential_matrix.size());
    CheckShape(after[e], potential_matrix.size());
    if (before[e].request != after[e].request) {
      ++changed;
      step.edge = e;
      step.side = StrategySide::kRequest;
    }
    if (before[e].send != after[e].send) {
      ++changed;
      step.edge = e;
      step.side = StrategySide::kSend;
    }
  }
  if (changed > 1) {
    throw ShardsimError("more than one strategy changed (" +
                        std::to_string(changed) + " sides differ)");
  }
  step.delta_potential =
      Potential(after, potential_matrix) - Potential(before, potential_matrix);
  step.delta_utility = EdgeUtility(after[step.edge], utility_matrix) -
                       EdgeUtility(before[step.edge], utility_matrix);
  if (before.empty()) step.delta_utility = 0.0;
  return step;
}

PotentialStep VerifyPotentialStep(std::span<const EdgeStrategy> before,
                                  std::span<const EdgeStrategy> after,
                                  const SquareMatrix& price) {
  return VerifyPotentialStep(before, after, price, price);
}

DynamicsTrace RunBestResponseDynamics(std::vector<EdgeStrategy>& strategies,
                                      const SquareMatrix& price,
                                      int max_sweeps) {
  DynamicsTrace trace;
  trace.potentials.push_back(Potential(strategies, price));
  const int m = price.size();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (auto& edge : strategies) {
      CheckShape(edge, m);
      auto request_values = price.Apply(edge.send);
      int s = LowestArgmax(request_values);
      const double current_request =
          std::inner_product(edge.request.begin(), edge.request.end(),
                             request_values.begin(), 0.0);
      if (request_values[s] > current_request + kTieTolerance) {
        edge.request = PureStrategy(m, ShardId(s));
        moved = true;
      }
      auto send_values = price.ApplyTransposed(edge.request);
      int t = LowestArgmax(send_values);
      const double current_send = std::inner_product(
          edge.send.begin(), edge.send.end(), send_values.begin(), 0.0);
      if (send_values[t] > current_send + kTieTolerance) {
        edge.send = PureStrategy(m, ShardId(t));
        moved = true;
      }
    }
    ++trace.sweeps;
    trace.potentials.push_back(Potential(strategies, price));
    if (!moved) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

}  // namespace shardsim
