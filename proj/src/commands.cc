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

#include "shardsim/commands.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "shardsim/run_io.h"
#include "shardsim/simulation.h"

namespace shardsim {
namespace {

// The sampled checks scale with m^2; larger pinned counts get slow.
constexpr int kMaxVerifyShards = 16;

void CheckFormats(const std::vector<std::string>& formats) {
  if (formats.empty()) throw ShardsimError("--format needs csv, json or both");
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") {
      throw ShardsimError("unknown output format '" + f +
                          "' (expected csv or json)");
    }
  }
}

bool Wants(const std::vector<std::string>& formats, const char* format) {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw ShardsimError("cannot write " + path.string());
  return file;
}

std::filesystem::path PrepareDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ShardsimError("cannot create output directory " + dir.string() +
                        ": " + ec.message());
  }
  return dir;
}

}  // namespace

ScenarioConfig ResolveScenario(const ScenarioSource& source) {
  const bool has_preset = !source.preset.empty();
  const bool has_file = !source.scenario_file.empty();
  if (has_preset == has_file) {
    throw ShardsimError("give exactly one of --preset or --scenario");
  }
  return has_preset ? Preset(source.preset)
                    : LoadScenarioFile(source.scenario_file);
}

std::filesystem::path OutputDir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return kDefaultOutputDir;
}

std::vector<SweepRow> RunSweep(const ScenarioConfig& base,
                               const std::string& param,
                               const std::vector<double>& values,
                               const std::vector<std::uint64_t>& seeds,
                               int jobs) {
  std::vector<ScenarioConfig> configs;
  for (double value : values) {
    for (std::uint64_t seed : seeds) {
      ScenarioConfig config = base;
      SetNumericParam(config, param, value);
      config.seed = seed;
      config.Validate();
      configs.push_back(std::move(config));
    }
  }
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<SweepRow> rows(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    const std::size_t stop = std::min(configs.size(), start + jobs);
    std::vector<std::future<RunSummary>> pending;
    for (std::size_t k = start; k < stop; ++k) {
      pending.push_back(std::async(std::launch::async, [&configs, k] {
        return Simulation(configs[k]).Run().summary;
      }));
    }
    for (std::size_t k = start; k < stop; ++k) {
      const RunSummary summary = pending[k - start].get();
      SweepRow& row = rows[k];
      row.value = values[k / seeds.size()];
      row.seed = seeds[k % seeds.size()];
      row.final_efficiency = summary.final_efficiency;
      row.final_mean_cardinality = summary.final_mean_cardinality;
      row.total_throughput = summary.accepted;
      row.blocks = summary.blocks;
    }
  }
  return rows;
}

int CmdRun(const RunRequest& request, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    CheckFormats(request.formats);
    config = ResolveScenario(request.source);
    if (request.seed) config.seed = *request.seed;
  } catch (const ShardsimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const RunResult result = RunScenario(config);
    const auto dir = PrepareDir(request.out_dir);
    const std::string stem =
        config.name + "_seed" + std::to_string(config.seed);
    if (Wants(request.formats, "csv")) {
      auto file = OpenOutput(dir / (stem + "_trace.csv"));
      WriteTraceCsv(file, result);
    }
    if (Wants(request.formats, "json")) {
      auto file = OpenOutput(dir / (stem + "_summary.json"));
      file << SummaryToJson(result).dump(2) << "\n";
    }
    out << config.name << " seed " << config.seed << ": "
        << result.summary.blocks << " blocks, " << result.summary.accepted
        << " transactions, final efficiency "
        << FormatDouble(result.summary.final_efficiency) << " ("
        << ToString(config.topology) << ", " << result.num_edges
        << " edges) -> " << dir.string() << "\n";
  } catch (const ShardsimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int CmdSweep(const SweepRequest& request, std::ostream& out,
             std::ostream& err) {
  ScenarioConfig base;
  std::vector<std::uint64_t> seeds = request.seeds;
  try {
    CheckFormats(request.formats);
    if (request.param.empty()) throw ShardsimError("--param is required");
    if (request.values.empty()) throw ShardsimError("--values is empty");
    base = ResolveScenario(request.source);
    if (seeds.empty()) seeds.push_back(base.seed);
    // Surface bad names and out-of-range values before any run starts.
    for (double value : request.values) {
      ScenarioConfig probe = base;
      SetNumericParam(probe, request.param, value);
      probe.Validate();
    }
  } catch (const ShardsimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto rows =
        RunSweep(base, request.param, request.values, seeds, request.jobs);
    const auto dir = PrepareDir(request.out_dir);
    const std::string stem = base.name + "_sweep_" + request.param;
    std::ostringstream table;
    table << "value,seed,final_efficiency,total_throughput,"
             "final_mean_cardinality,blocks\n";
    for (const auto& row : rows) {
      table << FormatDouble(row.value) << "," << row.seed << ","
            << FormatDouble(row.final_efficiency) << ","
            << row.total_throughput << ","
            << FormatDouble(row.final_mean_cardinality) << "," << row.blocks
            << "\n";
    }
    if (Wants(request.formats, "csv")) {
      auto file = OpenOutput(dir / (stem + ".csv"));
      file << "# config: " << ConfigToJson(base).dump() << "\n" << table.str();
    }
    if (Wants(request.formats, "json")) {
      nlohmann::ordered_json doc;
      doc["code_version"] = kCodeVersion;
      doc["config"] = ConfigToJson(base);
      doc["param"] = request.param;
      doc["seeds"] = seeds;
      doc["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : rows) {
        doc["rows"].push_back({{"value", row.value},
                               {"seed", row.seed},
                               {"final_efficiency", row.final_efficiency},
                               {"total_throughput", row.total_throughput},
                               {"final_mean_cardinality",
                                row.final_mean_cardinality},
                               {"blocks", row.blocks}});
      }
      auto file = OpenOutput(dir / (stem + ".json"));
      file << doc.dump(2) << "\n";
    }
    out << table.str();
  } catch (const ShardsimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int CmdVerify(const VerifyOptions& options, std::ostream& out) {
  bool all = true;
  for (const auto& result : RunPropertySuites(options)) {
    out << (result.passed ? "PASS " : "FAIL ") << result.name << ": "
        << result.detail << "\n";
    all = all && result.passed;
  }
  return all ? kExitOk : kExitFailure;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Sharded ledger transaction pricing simulator", "shardsim"};
  app.require_subcommand(1);

  std::string out_flag;
  std::vector<std::string> formats = {"csv", "json"};
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_flag,
                    "Output directory (default $SHARDSIM_OUT or ./shardsim_out)");
    cmd->add_option("--format", formats, "Artifacts to write: csv, json")
        ->delimiter(',');
  };

  RunRequest run;
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--preset", run.source.preset,
                      "Reproduction preset: fig2 .. fig6");
  run_cmd->add_option("--scenario", run.source.scenario_file,
                      "Scenario JSON file");
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Seed override");
  add_output(run_cmd);

  SweepRequest sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run a scenario over parameter values and seeds");
  sweep_cmd->add_option("--preset", sweep.source.preset, "Base preset");
  sweep_cmd->add_option("--scenario", sweep.source.scenario_file,
                        "Base scenario JSON file");
  sweep_cmd->add_option("--param", sweep.param, "Numeric config field to vary");
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated values")
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Comma-separated seeds")
      ->delimiter(',');
  sweep_cmd->add_option("--jobs", sweep.jobs, "Parallel runs (0: all cores)");
  add_output(sweep_cmd);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the property suites");
  verify_cmd->add_option("--seed", verify.seed, "Seed for instance generation");
  verify_cmd->add_option("--shards", verify.num_shards,
                         "Pin the shard count (0 draws it per trial)");
  verify_cmd->add_flag("--inject-fault", verify.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = run_seed;
    run.out_dir = OutputDir(out_flag);
    run.formats = formats;
    return CmdRun(run, out, err);
  }
  if (*sweep_cmd) {
    sweep.out_dir = OutputDir(out_flag);
    sweep.formats = formats;
    return CmdSweep(sweep, out, err);
  }
  if (verify.num_shards < 0 || verify.num_shards > kMaxVerifyShards) {
    err << "error: --shards must lie in [0, " << kMaxVerifyShards << "]\n";
    return kExitUsage;
  }
  return CmdVerify(verify, out);
}

}  // namespace shardsim
