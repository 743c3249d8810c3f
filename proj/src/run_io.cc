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

#include "shardsim/run_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace shardsim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Collects every problem in a scenario document before failing.
class Reader {
 public:
  template <typename T>
  void Read(const json& obj, const std::string& path, const char* key,
            T& out) {
    if (!obj.contains(key)) return;
    const json& value = obj.at(key);
    const std::string where = path.empty() ? key : path + "." + key;
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!value.is_number_integer()) throw std::invalid_argument("");
        out = value.get<int>();
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!value.is_number_unsigned() &&
            !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
          throw std::invalid_argument("");
        }
        out = value.get<std::uint64_t>();
      } else if constexpr (std::is_same_v<T, double>) {
        if (!value.is_number()) throw std::invalid_argument("");
        out = value.get<double>();
      } else {
        if (!value.is_string()) throw std::invalid_argument("");
        out = value.get<std::string>();
      }
    } catch (const std::exception&) {
      problems_.push_back(where + ": wrong type (" +
                          std::string(value.type_name()) + ")");
    }
  }

  template <typename Enum, typename Parse>
  void ReadEnum(const json& obj, const char* key, Enum& out, Parse parse) {
    std::string text;
    if (!obj.contains(key)) return;
    Read(obj, "", key, text);
    if (text.empty()) return;
    try {
      out = parse(text);
    } catch (const ShardsimError& e) {
      problems_.push_back(std::string(key) + ": " + e.what());
    }
  }

  void RejectUnknown(const json& obj, const std::string& path,
                     const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
      if (!known.contains(key)) {
        problems_.push_back("unknown field '" +
                            (path.empty() ? key : path + "." + key) + "'");
      }
    }
  }

  void Problem(std::string message) { problems_.push_back(std::move(message)); }

  void ThrowIfAny() const {
    if (problems_.empty()) return;
    std::string message = "invalid scenario document:";
    for (const auto& p : problems_) message += "\n  - " + p;
    throw ShardsimError(message);
  }

 private:
  std::vector<std::string> problems_;
};

ScenarioConfig BaseRing() {
  ScenarioConfig config;
  config.topology = TopologyKind::kPath;
  config.num_agents = 20;
  config.num_shards = 4;
  config.slots_per_shard = 2500;
  config.blocks_target = 5;
  config.generation = Generation::kRoundShuffle;
  config.balance_mode = BalanceMode::kStaggered;
  config.initial_balance = 1e6;
  config.amount = 10.0;
  config.seed = 1;
  return config;
}

ScenarioConfig BaseScaleFree() {
  ScenarioConfig config;
  config.topology = TopologyKind::kPreferentialAttachment;
  config.num_agents = 100;
  config.attach = 2;
  config.num_shards = 8;
  config.slots_per_shard = 12500;
  config.blocks_target = 5;
  config.generation = Generation::kUniformEdge;
  config.balance_mode = BalanceMode::kUniform;
  config.initial_balance = 1e6;
  config.amount = 10.0;
  config.seed = 1;
  return config;
}

ordered_json BlockToJson(const BlockSummary& block) {
  ordered_json out;
  out["index"] = block.index;
  out["transactions"] = block.transactions;
  out["first_tx_index"] = block.first_tx_index;
  out["last_tx_index"] = block.last_tx_index;
  out["trigger_shard"] = block.trigger_shard;
  out["shard_counts"] = block.shard_counts;
  out["efficiency"] = block.efficiency;
  out["mean_cardinality"] = block.mean_cardinality;
  out["balance"] = block.balance;
  out["loading_sum"] = block.loading_sum;
  out["request_spread"] = block.request_spread;
  out["potential"] = block.potential;
  return out;
}

}  // namespace

ordered_json ConfigToJson(const ScenarioConfig& config) {
  ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["name"] = config.name;
  out["topology"] = ToString(config.topology);
  out["num_agents"] = config.num_agents;
  out["attach"] = config.attach;
  out["num_shards"] = config.num_shards;
  out["slots_per_shard"] = config.slots_per_shard;
  out["blocks_target"] = config.blocks_target;
  out["pricing"] = {{"nominal_price", config.pricing.nominal_price},
                    {"max_fee", config.pricing.max_fee},
                    {"alpha", config.pricing.alpha}};
  out["gamma_request"] = config.gamma_request;
  out["gamma_send"] = config.gamma_send;
  out["policy"] = ToString(config.policy);
  out["send_policy"] = ToString(config.send_policy);
  out["generation"] = ToString(config.generation);
  out["balance_mode"] = ToString(config.balance_mode);
  out["initial_balance"] = config.initial_balance;
  out["amount"] = config.amount;
  out["seed"] = config.seed;
  out["max_cardinality"] = config.max_cardinality;
  out["tie_break"] = ToString(config.tie_break);
  out["estimate_prior"] = config.estimate_prior;
  return out;
}

ScenarioConfig ConfigFromJson(const json& doc) {
  Reader reader;
  if (!doc.is_object()) throw ShardsimError("scenario must be a JSON object");
  ScenarioConfig config;
  if (!doc.contains("schema_version")) {
    reader.Problem("missing schema_version");
  } else if (!doc["schema_version"].is_number_integer() ||
             doc["schema_version"].get<int>() != kSchemaVersion) {
    reader.Problem("unsupported schema_version (expected " +
                   std::to_string(kSchemaVersion) + ")");
  }
  reader.RejectUnknown(
      doc, "",
      {"schema_version", "name", "topology", "num_agents", "attach",
       "num_shards", "slots_per_shard", "blocks_target", "pricing",
       "gamma_request", "gamma_send", "policy", "send_policy", "generation",
       "balance_mode", "initial_balance", "amount", "seed", "max_cardinality", "tie_break",
       "estimate_prior"});
  reader.Read(doc, "", "name", config.name);
  reader.ReadEnum(doc, "topology", config.topology, ParseTopology);
  reader.Read(doc, "", "num_agents", config.num_agents);
  reader.Read(doc, "", "attach", config.attach);
  reader.Read(doc, "", "num_shards", config.num_shards);
  reader.Read(doc, "", "slots_per_shard", config.slots_per_shard);
  reader.Read(doc, "", "blocks_target", config.blocks_target);
  if (doc.contains("pricing")) {
    const json& pricing = doc["pricing"];
    if (!pricing.is_object()) {
      reader.Problem("pricing: must be an object");
    } else {
      reader.RejectUnknown(pricing, "pricing",
                           {"nominal_price", "max_fee", "alpha"});
      reader.Read(pricing, "pricing", "nominal_price",
                  config.pricing.nominal_price);
      reader.Read(pricing, "pricing", "max_fee", config.pricing.max_fee);
      reader.Read(pricing, "pricing", "alpha", config.pricing.alpha);
    }
  }
  reader.Read(doc, "", "gamma_request", config.gamma_request);
  reader.Read(doc, "", "gamma_send", config.gamma_send);
  reader.ReadEnum(doc, "policy", config.policy, ParsePolicy);
  reader.ReadEnum(doc, "send_policy", config.send_policy, ParseSendPolicy);
  reader.ReadEnum(doc, "generation", config.generation, ParseGeneration);
  reader.ReadEnum(doc, "balance_mode", config.balance_mode, ParseBalanceMode);
  reader.Read(doc, "", "initial_balance", config.initial_balance);
  reader.Read(doc, "", "amount", config.amount);
  reader.Read(doc, "", "seed", config.seed);
  reader.Read(doc, "", "max_cardinality", config.max_cardinality);
  reader.ReadEnum(doc, "tie_break", config.tie_break, ParseTieBreak);
  reader.Read(doc, "", "estimate_prior", config.estimate_prior);
  reader.ThrowIfAny();
  config.Validate();
  return config;
}

ScenarioConfig LoadScenarioFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ShardsimError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ShardsimError("scenario file " + path.string() +
                        " is not valid JSON: " + e.what());
  }
  return ConfigFromJson(doc);
}

std::vector<std::string> PresetNames() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6"};
}

ScenarioConfig Preset(std::string_view name) {
  ScenarioConfig config;
  if (name == "fig2") {
    config = BaseRing();
    config.policy = Policy::kFixedPrice;
  } else if (name == "fig3") {
    config = BaseRing();
    config.policy = Policy::kBestResponse;
    config.send_policy = SendPolicy::kFundedShard;
    config.pricing.alpha = 0.0;
  } else if (name == "fig4") {
    config = BaseRing();
    config.policy = Policy::kBestResponse;
    config.send_policy = SendPolicy::kFundedShard;
    config.pricing.alpha = 0.001;
  } else if (name == "fig5") {
    config = BaseScaleFree();
    config.policy = Policy::kFixedPrice;
  } else if (name == "fig6") {
    config = BaseScaleFree();
    config.policy = Policy::kBestResponse;
    config.pricing.alpha = 0.00015;
  } else {
    throw ShardsimError("unknown preset '" + std::string(name) +
                        "' (expected fig2, fig3, fig4, fig5 or fig6)");
  }
  config.name = std::string(name);
  return config;
}

std::vector<std::string> NumericParamNames() {
  return {"num_agents",      "attach",          "num_shards",
          "slots_per_shard", "blocks_target",   "pricing.nominal_price",
          "pricing.max_fee", "pricing.alpha",   "gamma_request",
          "gamma_send",      "initial_balance", "amount",
          "seed",            "max_cardinality", "estimate_prior"};
}

void SetNumericParam(ScenarioConfig& config, std::string_view name,
                     double value) {
  auto as_int = [&]() {
    if (value != std::floor(value) || std::abs(value) > 1e9) {
      throw ShardsimError("parameter " + std::string(name) +
                          " needs an integer value");
    }
    return static_cast<int>(value);
  };
  if (name == "alpha" || name == "pricing.alpha") {
    config.pricing.alpha = value;
  } else if (name == "pricing.nominal_price") {
    config.pricing.nominal_price = value;
  } else if (name == "pricing.max_fee") {
    config.pricing.max_fee = value;
  } else if (name == "num_agents") {
    config.num_agents = as_int();
  } else if (name == "attach") {
    config.attach = as_int();
  } else if (name == "num_shards") {
    config.num_shards = as_int();
  } else if (name == "slots_per_shard") {
    config.slots_per_shard = as_int();
  } else if (name == "blocks_target") {
    config.blocks_target = as_int();
  } else if (name == "gamma_request") {
    config.gamma_request = value;
  } else if (name == "gamma_send") {
    config.gamma_send = value;
  } else if (name == "initial_balance") {
    config.initial_balance = value;
  } else if (name == "amount") {
    config.amount = value;
  } else if (name == "seed") {
    if (value < 0 || value != std::floor(value)) {
      throw ShardsimError("seed must be a non-negative integer");
    }
    config.seed = static_cast<std::uint64_t>(value);
  } else if (name == "max_cardinality") {
    config.max_cardinality = as_int();
  } else if (name == "estimate_prior") {
    config.estimate_prior = value;
  } else {
    throw ShardsimError("unknown numeric parameter '" + std::string(name) +
                        "'");
  }
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

void WriteTraceCsv(std::ostream& out, const RunResult& result) {
  const int m = result.config.num_shards;
  out << "# config: " << ConfigToJson(result.config).dump() << "\n";
  out << "tx_index";
  for (int s = 0; s < m; ++s) out << ",shard_usage_" << s;
  out << ",loading_sum,mean_cardinality,fee,accepted,block_index\n";
  std::string line;
  for (const MetricSample& sample : result.trace) {
    line = std::to_string(sample.tx_index);
    for (double u : sample.usage) {
      line += ',';
      line += FormatDouble(u);
    }
    line += ',' + FormatDouble(sample.loading_sum);
    line += ',' + FormatDouble(sample.mean_cardinality);
    line += ',' + FormatDouble(sample.fee);
    line += sample.accepted ? ",1," : ",0,";
    line += std::to_string(sample.block_index);
    line += '\n';
    out << line;
  }
}

ordered_json SummaryToJson(const RunResult& result) {
  ordered_json out;
  out["code_version"] = kCodeVersion;
  out["seed"] = result.config.seed;
  out["config"] = ConfigToJson(result.config);
  out["network"] = {{"topology", ToString(result.config.topology)},
                    {"num_agents", result.config.num_agents},
                    {"num_edges", result.num_edges}};
  const RunSummary& s = result.summary;
  std::int64_t in_blocks = 0;
  for (const auto& b : result.block_summaries) in_blocks += b.transactions;
  out["summary"] = {{"attempts", s.attempts},
                    {"accepted", s.accepted},
                    {"rejected", s.rejected},
                    {"blocks", s.blocks},
                    {"total_throughput", in_blocks},
                    {"total_fees", s.total_fees},
                    {"final_efficiency", s.final_efficiency},
                    {"final_mean_cardinality", s.final_mean_cardinality},
                    {"min_estimate_top_mass", s.min_estimate_top_mass},
                    {"mean_estimate_top_mass", s.mean_estimate_top_mass}};
  ordered_json blocks = ordered_json::array();
  for (const auto& b : result.block_summaries) blocks.push_back(BlockToJson(b));
  out["blocks"] = std::move(blocks);
  return out;
}

}  // namespace shardsim
