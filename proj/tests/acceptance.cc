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

// Reproduction and property acceptance checks. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shardsim/commands.h"
#include "shardsim/run_io.h"
#include "shardsim/simulation.h"
#include "shardsim/verify.h"

namespace shardsim {
namespace {

constexpr double kReferenceThroughput = 25899.0;
constexpr int kThroughputSeeds = 10;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string Fixed(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::int64_t Throughput(const RunResult& r) {
  std::int64_t total = 0;
  for (const auto& b : r.block_summaries) total += b.transactions;
  return total;
}

ScenarioConfig WithSeed(ScenarioConfig config, std::uint64_t seed) {
  config.seed = seed;
  return config;
}

Outcome RandomBaselineThroughput() {
  double sum = 0.0;
  double slowest = 0.0;
  for (int seed = 1; seed <= kThroughputSeeds; ++seed) {
    const auto start = std::chrono::steady_clock::now();
    const RunResult r = RunScenario(WithSeed(Preset("fig2"), seed));
    const std::chrono::duration<double> took =
        std::chrono::steady_clock::now() - start;
    slowest = std::max(slowest, took.count());
    sum += static_cast<double>(Throughput(r));
  }
  const double mean = sum / kThroughputSeeds;
  const double rel = mean / kReferenceThroughput - 1.0;
  return {std::abs(rel) <= 0.10 && slowest < 10.0,
          "mean " + Fixed(mean, 1) + " transactions over " +
              std::to_string(kThroughputSeeds) + " seeds (" +
              Fixed(100.0 * rel, 2) + "% vs 25899, limit 10%), slowest run " +
              Fixed(slowest, 3) + " s (limit 10 s)"};
}

Outcome CongestionOnlyPricing() {
  const RunResult r = RunScenario(Preset("fig3"));
  const auto& blocks = r.block_summaries;
  if (blocks.size() < 3) return {false, "fewer than 3 blocks"};
  double loading = 0.0;
  for (std::size_t b = blocks.size() - 3; b < blocks.size(); ++b) {
    loading += blocks[b].loading_sum;
  }
  loading /= 3.0;
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.efficiency);
  return {loading < 0.05 && worst < 0.65,
          "mean loading sum over final 3 blocks " + Fixed(loading, 5) +
              " (limit 0.05), max block efficiency " + Fixed(worst) +
              " (limit 0.65)"};
}

Outcome EfficiencyPricing() {
  const RunResult r = RunScenario(Preset("fig4"));
  const double eff = r.summary.final_efficiency;
  const double card = r.summary.final_mean_cardinality;
  return {eff >= 0.90 && card <= 1.1,
          "final efficiency " + Fixed(eff) + " (min 0.90), final mean " +
              "cardinality " + Fixed(card) + " (max 1.1)"};
}

Outcome ScaleFreeGain() {
  bool passed = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const ScenarioConfig base = WithSeed(Preset("fig5"), seed);
    const ScenarioConfig priced = WithSeed(Preset("fig6"), seed);
    if (BuildNetwork(base).edges() != BuildNetwork(priced).edges()) {
      return {false, "fig5 and fig6 networks differ for seed " +
                         std::to_string(seed)};
    }
    const double random = RunScenario(base).summary.final_efficiency;
    const double ours = RunScenario(priced).summary.final_efficiency;
    const double gain = ours - random;
    passed = passed && gain >= 0.25;
    if (!detail.empty()) detail += "; ";
    detail += "seed " + std::to_string(seed) + ": " + Fixed(ours) + " vs " +
              Fixed(random) + " (+" + Fixed(gain) + ")";
  }
  return {passed, detail + " (min gain 0.25)"};
}

Outcome FromProperty(const PropertyResult& result) {
  return {result.passed, result.name + ": " + result.detail};
}

Outcome Determinism() {
  std::string detail;
  bool passed = true;
  for (const auto& name : PresetNames()) {
    std::ostringstream a, b;
    WriteTraceCsv(a, RunScenario(Preset(name)));
    WriteTraceCsv(b, RunScenario(Preset(name)));
    const bool same = a.str() == b.str();
    passed = passed && same;
    if (!detail.empty()) detail += ", ";
    detail += name + (same ? " identical" : " DIFFERS") + " (" +
              std::to_string(a.str().size()) + " bytes)";
  }
  return {passed, detail};
}

}  // namespace
}  // namespace shardsim

int main() {
  using namespace shardsim;
  // Property budgets at their defaults are the acceptance counts.
  const VerifyOptions options;
  struct Criterion {
    const char* name;
    Outcome (*run)(const VerifyOptions&);
  };
  const std::vector<Criterion> criteria = {
      {"random-baseline throughput",
       [](const VerifyOptions&) { return RandomBaselineThroughput(); }},
      {"congestion-only pricing",
       [](const VerifyOptions&) { return CongestionOnlyPricing(); }},
      {"efficiency pricing",
       [](const VerifyOptions&) { return EfficiencyPricing(); }},
      {"scale-free gain over random",
       [](const VerifyOptions&) { return ScaleFreeGain(); }},
      {"potential identity",
       [](const VerifyOptions& o) {
         return FromProperty(CheckPotentialIdentity(o));
       }},
      {"vertex optimality",
       [](const VerifyOptions& o) {
         return FromProperty(CheckVertexOptimality(o));
       }},
      {"monotone convergence",
       [](const VerifyOptions& o) {
         return FromProperty(CheckMonotoneConvergence(o));
       }},
      {"metric oracle",
       [](const VerifyOptions& o) { return FromProperty(CheckMetricOracle(o)); }},
      {"expected cardinality",
       [](const VerifyOptions& o) {
         return FromProperty(CheckExpectedCardinality(o));
       }},
      {"determinism", [](const VerifyOptions&) { return Determinism(); }},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome outcome;
    try {
      outcome = criteria[k].run(options);
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::cout << (outcome.passed ? "PASS " : "FAIL ") << (k + 1) << " "
              << criteria[k].name << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? kExitOk : kExitFailure;
}
