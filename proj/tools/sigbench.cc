// Copyright 2026 The sigbench Authors
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

// Command-line front end: climbing, random, tune and report.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sigbench/config.h"
#include "sigbench/harness.h"
#include "sigbench/output.h"
#include "sigbench/report.h"
#include "sigbench/rng.h"
#include "sigbench/tuner.h"

namespace {

using namespace sigbench;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Usage or configuration problem; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CommonFlags {
  std::string config;
  std::string algos;
  std::string out;
  std::string preset;
  std::string fixed;
  std::vector<std::string> sets;
  std::int64_t runs = 0;
  std::int64_t episodes = 0;
  std::int64_t eval_every = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<CLI::Option*> options;

  void Register(CLI::App* app, int default_runs) {
    runs = default_runs;
    options = {
        app->add_option("--config", config, "TOML experiment file")->check(CLI::ExistingFile),
        app->add_option("--algos", algos, "Comma-separated algorithms or 'all'"),
        app->add_option("--runs", runs, "Runs per matrix")->check(CLI::PositiveNumber),
        app->add_option("--episodes", episodes, "Episodes per run")->check(CLI::PositiveNumber),
        app->add_option("--eval-every", eval_every, "Evaluation cadence in episodes")
            ->check(CLI::PositiveNumber),
        app->add_option("--seed", seed, "Master seed"),
        app->add_option("--out", out, "Output directory (default $SIGBENCH_OUT_DIR)"),
        app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber),
        app->add_option("--preset", preset, "Preset bank: 3x3 or 32x32"),
        app->add_option("--fixed", fixed, "Replace one agent by an optimal fixed policy: "
                                          "none, sender or receiver"),
        app->add_option("--set", sets, "Override name=value for every algorithm"),
    };
  }

  bool Given(const std::string& name) const {
    for (CLI::Option* o : options) {
      if (o->get_name() == name) return o->count() > 0;
    }
    return false;
  }

  // Config file first, then explicit flags.
  void Apply(ExperimentFile* file) const {
    if (!config.empty()) ApplyConfigToml(ReadText(config), config, file);
    if (Given("--algos")) file->algorithms = ParseAlgorithmList(algos);
    if (Given("--runs")) file->runs = static_cast<int>(runs);
    if (Given("--episodes")) file->episodes = episodes;
    if (Given("--eval-every")) file->eval_every = eval_every;
    if (Given("--seed")) file->seed = seed;
    if (Given("--out")) file->out = out;
    if (Given("--threads")) file->threads = threads;
    if (Given("--preset")) {
      file->preset = ParsePreset(preset);
      if (!file->preset) throw UsageError("unknown preset '" + preset + "'");
    }
    if (Given("--fixed")) file->fixed = ParseFixedAgent(fixed);
    for (const std::string& text : sets) {
      const auto [name, value] = ParseAssignment(text);
      for (Algorithm a : file->algorithms) file->overrides[a][name] = value;
    }
  }
};

void Log(const std::string& line) { std::cerr << line << std::endl; }

int RunSweep(const ExperimentFile& file, const std::string& command) {
  file.Validate();
  std::vector<SignalingGame> games;
  nlohmann::ordered_json matrix_seeds = nlohmann::ordered_json::array();
  if (file.game == GameSource::Kind::kClimbing) {
    games = ClimbingGames();
  } else {
    games = RandomGames(file.size, file.matrices, file.seed);
    for (int i = 0; i < file.matrices; ++i) matrix_seeds.push_back(MatrixSeed(file.seed, i));
  }
  const std::string matrix_id =
      file.game == GameSource::Kind::kClimbing ? "0" : "all";

  std::vector<LabeledSummary> summaries;
  nlohmann::ordered_json per_algorithm;
  std::int64_t total_runs = 0;
  std::int64_t total_failures = 0;
  bool all_failed = false;
  for (Algorithm algorithm : file.algorithms) {
    ExperimentConfig config;
    config.games = games;
    config.agent = file.ResolveSpec(algorithm);
    config.episodes = file.episodes;
    config.eval_every = file.eval_every;
    config.runs_per_matrix = file.runs;
    config.master_seed = file.seed;
    config.threads = file.threads;
    config.fixed = file.fixed;
    const std::string name(AlgorithmName(algorithm));
    const auto start = std::chrono::steady_clock::now();
    try {
      AggregateSummary summary = RunExperiment(config);
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      std::ostringstream line;
      line << name << ": pct_optimal=" << FormatNumber(summary.final_point().pct_optimal)
           << " norm_reward=" << FormatNumber(summary.final_point().mean_norm_reward)
           << " failures=" << summary.failures << " (" << FormatNumber(seconds) << " s)";
      Log(line.str());
      total_runs += summary.runs + summary.failures;
      total_failures += summary.failures;
      per_algorithm[name] = SummaryJson(summary);
      summaries.push_back({name, matrix_id, std::move(summary)});
    } catch (const std::runtime_error& e) {
      Log(name + ": " + e.what());
      const std::int64_t n = static_cast<std::int64_t>(games.size()) * file.runs;
      total_runs += n;
      total_failures += n;
      per_algorithm[name] = {{"runs", 0}, {"failures", n}, {"error", e.what()}};
      all_failed = true;
    }
  }

  const std::filesystem::path dir(file.out);
  if (!summaries.empty()) WriteExperimentFiles(dir, summaries);
  nlohmann::ordered_json summary;
  summary["tool_version"] = kToolVersion;
  summary["command"] = command;
  summary["config"] = file.ToJson();
  summary["seeds"] = {{"master", file.seed},
                      {"run_seed", "derived from (master, matrix_index, run_index)"},
                      {"matrix_seeds", matrix_seeds}};
  summary["totals"] = {{"matrices", games.size()},
                       {"runs", total_runs},
                       {"failures", total_failures}};
  summary["algorithms"] = per_algorithm;
  WriteFile(dir / "summary.json", summary.dump(2) + "\n");
  if (total_failures > 0) {
    Log("error: " + std::to_string(total_failures) + " of " + std::to_string(total_runs) +
        " runs failed with non-finite values" + (all_failed ? " (some algorithms entirely)" : ""));
    return kExitRuntime;
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Benchmark suite for learned communication in signaling games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CLI::App* climbing = app.add_subcommand("climbing", "Run algorithms on the climbing game");
  CommonFlags climbing_flags;
  climbing_flags.Register(climbing, 1000);

  CLI::App* random = app.add_subcommand("random", "Sweep over random payoff matrices");
  CommonFlags random_flags;
  random_flags.Register(random, 1000);
  int size = 3;
  int matrices = 1000;
  CLI::Option* size_opt =
      random->add_option("--size", size, "Matrix size n (n x n)")->check(CLI::PositiveNumber);
  CLI::Option* matrices_opt = random->add_option("--matrices", matrices, "Number of matrices")
                                  ->check(CLI::PositiveNumber);

  CLI::App* tune = app.add_subcommand("tune", "Grid-search hyperparameters");
  std::string tune_algo;
  std::string grid = "default";
  std::string tune_preset;
  std::string tune_out;
  TuneSettings settings;
  settings.matrices = 100;
  settings.runs_per_matrix = 1000;
  std::int64_t tune_episodes = 0;
  std::int64_t tune_eval = 0;
  tune->add_option("--algo", tune_algo, "Algorithm to tune")->required();
  tune->add_option("--grid", grid, "'default' or a TOML grid file");
  tune->add_option("--size", settings.size, "Matrix size")->check(CLI::PositiveNumber);
  tune->add_option("--matrices", settings.matrices, "Tuning matrices")
      ->check(CLI::PositiveNumber);
  tune->add_option("--runs", settings.runs_per_matrix, "Runs per matrix")
      ->check(CLI::PositiveNumber);
  tune->add_option("--episodes", tune_episodes, "Episodes per run")->check(CLI::PositiveNumber);
  tune->add_option("--eval-every", tune_eval, "Evaluation cadence")->check(CLI::PositiveNumber);
  tune->add_option("--seed", settings.master_seed, "Master seed");
  tune->add_option("--threads", settings.threads, "Worker threads")->check(CLI::PositiveNumber);
  tune->add_option("--preset", tune_preset, "Preset bank for fixed parameters");
  tune->add_option("--out", tune_out, "Output directory (default $SIGBENCH_OUT_DIR)");

  CLI::App* report = app.add_subcommand("report", "Render SVG figures from harness output");
  std::string report_in;
  std::string report_svg;
  report->add_option("--in", report_in, "Directory with harness CSVs");
  report->add_option("--svg", report_svg, "Directory for SVG files (default <in>/report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (climbing->parsed()) {
      ExperimentFile file;
      file.name = "climbing";
      file.game = GameSource::Kind::kClimbing;
      file.size = 3;
      file.algorithms = ParseAlgorithmList("all");
      file.out = DefaultOutputDir();
      climbing_flags.Apply(&file);
      if (file.game != GameSource::Kind::kClimbing) {
        throw UsageError("the climbing command needs game.kind = \"climbing\"");
      }
      return RunSweep(file, app.get_subcommands().front()->get_name());
    }
    if (random->parsed()) {
      ExperimentFile file;
      file.name = "random";
      file.game = GameSource::Kind::kRandom;
      file.matrices = matrices;
      file.algorithms = ParseAlgorithmList("all");
      file.out = DefaultOutputDir();
      file.episodes = 0;  // filled from the size below unless configured
      file.eval_every = 0;
      if (!random_flags.config.empty()) {
        ApplyConfigToml(ReadText(random_flags.config), random_flags.config, &file);
      }
      if (size_opt->count() > 0) file.size = size;
      if (matrices_opt->count() > 0) file.matrices = matrices;
      if (file.game != GameSource::Kind::kRandom) {
        throw UsageError("the random command needs game.kind = \"random\"");
      }
      // Size-dependent defaults unless given by the config or flags.
      const bool big = DefaultPresetFor(file.size) == PresetBank::k32x32;
      if (file.episodes == 0) file.episodes = big ? 25000 : 1000;
      if (file.eval_every == 0) file.eval_every = big ? 250 : 10;
      CommonFlags flags = random_flags;
      flags.config.clear();
      flags.Apply(&file);
      return RunSweep(file, app.get_subcommands().front()->get_name());
    }
    if (tune->parsed()) {
      const auto algorithm = ParseAlgorithm(tune_algo);
      if (!algorithm) throw UsageError("unknown algorithm '" + tune_algo + "'");
      PresetBank bank = DefaultPresetFor(settings.size);
      if (!tune_preset.empty()) {
        const auto parsed = ParsePreset(tune_preset);
        if (!parsed) throw UsageError("unknown preset '" + tune_preset + "'");
        bank = *parsed;
      }
      const bool big = bank == PresetBank::k32x32;
      settings.episodes = tune_episodes > 0 ? tune_episodes : (big ? 25000 : 1000);
      settings.eval_every = tune_eval > 0 ? tune_eval : (big ? 250 : 10);
      const GridSpec spec = grid == "default"
                                ? DefaultGrid(*algorithm, bank)
                                : ParseGridToml(ReadText(grid), *algorithm, bank);
      spec.Validate();
      Log("tuning " + std::string(AlgorithmName(*algorithm)) + " over " +
          std::to_string(spec.Cardinality()) + " grid points");
      const TuningResult result = GridSearch(spec, settings);
      const std::filesystem::path dir(tune_out.empty() ? DefaultOutputDir() : tune_out);
      WriteFile(dir / "tuning.csv", TuningCsv(result));
      WriteFile(dir / "best.json", BestJson(result, settings).dump(2) + "\n");
      Log("best pct_optimal=" + FormatNumber(result.rows[result.best].pct_optimal));
      return kExitOk;
    }
    if (report->parsed()) {
      const std::filesystem::path in(report_in.empty() ? DefaultOutputDir() : report_in);
      const std::filesystem::path out =
          report_svg.empty() ? in / "report" : std::filesystem::path(report_svg);
      for (const std::string& name : RenderReport(in, out)) Log("wrote " + name);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return Main(argc, argv); }
