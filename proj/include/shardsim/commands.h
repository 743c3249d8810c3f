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

#ifndef SHARDSIM_COMMANDS_H_
#define SHARDSIM_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shardsim/scenario.h"
#include "shardsim/verify.h"

// The `shardsim run|sweep|verify` subcommands. Each returns a process exit
// code and writes human-readable output to `out` and diagnostics to `err`.

namespace shardsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Consulted when --out is not given.
inline constexpr const char* kOutputDirEnv = "SHARDSIM_OUT";
inline constexpr const char* kDefaultOutputDir = "shardsim_out";

struct ScenarioSource {
  std::string preset;
  std::filesystem::path scenario_file;
};

struct RunRequest {
  ScenarioSource source;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir;
  std::vector<std::string> formats = {"csv", "json"};
};

struct SweepRequest {
  ScenarioSource source;
  std::string param;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir;
  std::vector<std::string> formats = {"csv", "json"};
  int jobs = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  double final_efficiency = 0.0;
  double final_mean_cardinality = 0.0;
  std::int64_t total_throughput = 0;
  std::int64_t blocks = 0;
};

// Resolves a preset name or scenario file; exactly one must be set.
ScenarioConfig ResolveScenario(const ScenarioSource& source);

// --out, else $SHARDSIM_OUT, else ./shardsim_out.
std::filesystem::path OutputDir(const std::string& flag);

// Runs every (value, seed) pair. Rows follow the order of `values`, then of
// `seeds`, whatever the job count.
std::vector<SweepRow> RunSweep(const ScenarioConfig& base,
                               const std::string& param,
                               const std::vector<double>& values,
                               const std::vector<std::uint64_t>& seeds,
                               int jobs);

int CmdRun(const RunRequest& request, std::ostream& out, std::ostream& err);
int CmdSweep(const SweepRequest& request, std::ostream& out, std::ostream& err);
int CmdVerify(const VerifyOptions& options, std::ostream& out);

// Parses a command line and dispatches to a subcommand.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace shardsim

#endif  // SHARDSIM_COMMANDS_H_
