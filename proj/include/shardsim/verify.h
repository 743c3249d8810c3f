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

#ifndef SHARDSIM_VERIFY_H_
#define SHARDSIM_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

// Randomized property checks over the metric, pricing and game layers. Each
// check draws its instances from its own stream seeded by `seed`, so a
// failing report can be reproduced from the options alone.

namespace shardsim {

inline constexpr double kIdentityTolerance = 1e-12;

struct VerifyOptions {
  std::uint64_t seed = 1;
  // 0 draws the shard count per trial; anything else pins it.
  int num_shards = 0;
  // Evaluates edge utilities against a copy of P with one entry negated, so
  // the potential identity must fail. Test harness only.
  bool inject_fault = false;

  int identity_trials = 100000;
  int vertex_instances = 10000;
  int vertex_samples = 1000;
  int convergence_trials = 100;
  int convergence_sweeps = 10;
  int pool_trials = 10000;
  int pricing_trials = 1000;
  int max_cardinality_shards = 16;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// |dH - du| <= kIdentityTolerance for random unilateral changes, random
// loading, alpha and shard counts 2..8.
PropertyResult CheckPotentialIdentity(const VerifyOptions& options);
// The pure best response is never beaten by sampled mixed strategies and
// attains the vertex maximum.
PropertyResult CheckVertexOptimality(const VerifyOptions& options);
// Asynchronous pure best-response sweeps with P frozen on random networks:
// H never decreases and a fixed point is reached within the sweep budget.
PropertyResult CheckMonotoneConvergence(const VerifyOptions& options);
// Incremental pool counts and metrics against recomputation from the raw
// transactions.
PropertyResult CheckMetricOracle(const VerifyOptions& options);
// Uniform strategies give expected cardinality 2 - 1/m, compared with direct
// enumeration of all shard pairs.
PropertyResult CheckExpectedCardinality(const VerifyOptions& options);
// Expected price under pure strategies equals the price of the realized
// shard set, for every pair of shards.
PropertyResult CheckPricingConsistency(const VerifyOptions& options);

std::vector<PropertyResult> RunPropertySuites(const VerifyOptions& options);

}  // namespace shardsim

#endif  // SHARDSIM_VERIFY_H_
