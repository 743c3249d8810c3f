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

#ifndef SHARDSIM_RUN_IO_H_
#define SHARDSIM_RUN_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shardsim/scenario.h"
#include "shardsim/simulation.h"

namespace shardsim {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCodeVersion = "0.3.0";

nlohmann::ordered_json ConfigToJson(const ScenarioConfig& config);
// Strict parse: unknown keys, wrong types and a missing or unsupported
// schema_version are errors. Missing keys keep their defaults. The result is
// validated before it is returned.
ScenarioConfig ConfigFromJson(const nlohmann::json& doc);
ScenarioConfig LoadScenarioFile(const std::filesystem::path& path);

// Frozen reproduction scenarios: fig2 .. fig6.
std::vector<std::string> PresetNames();
ScenarioConfig Preset(std::string_view name);

// Sets a numeric config field by its JSON name ("pricing.alpha", "seed",
// ...). "alpha" is accepted for "pricing.alpha".
void SetNumericParam(ScenarioConfig& config, std::string_view name,
                     double value);
std::vector<std::string> NumericParamNames();

// Trace CSV: a "# config: {...}" line, then
// tx_index,shard_usage_0..m-1,loading_sum,mean_cardinality,fee,accepted,
// block_index.
void WriteTraceCsv(std::ostream& out, const RunResult& result);
nlohmann::ordered_json SummaryToJson(const RunResult& result);

// Shortest round-trip decimal form of `value`.
std::string FormatDouble(double value);

}  // namespace shardsim

#endif  // SHARDSIM_RUN_IO_H_
