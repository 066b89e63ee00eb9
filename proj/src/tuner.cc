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

#include "sigbench/tuner.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sigbench/harness.h"
#include "sigbench/output.h"
#include "toml.hpp"

namespace sigbench {
namespace {

constexpr std::uint64_t kTuningPool = 1;

const std::vector<double> kStepSizes = {0.01, 0.05, 0.1, 0.5};
const std::vector<double> kInitialEpsilons = {1, 0.5, 0.3, 0.1};

bool IsParamName(std::string_view name) {
  const auto names = AllParamNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

void GridSpec::Validate() const {
  if (axes.empty()) throw std::invalid_argument("grid has no axes");
  for (const GridAxis& axis : axes) {
    if (axis.values.empty()) {
      throw std::invalid_argument("grid axis '" + axis.name + "' is empty");
    }
    if (axis.name != kBetaRatioAxis && !IsParamName(axis.name)) {
      throw std::invalid_argument("unknown grid parameter '" + axis.name + "'");
    }
    const auto dup = std::count_if(axes.begin(), axes.end(), [&](const GridAxis& a) {
      return a.name == axis.name;
    });
    if (dup > 1) throw std::invalid_argument("duplicate grid axis '" + axis.name + "'");
  }
}

std::size_t GridSpec::Cardinality() const {
  std::size_t n = 1;
  for (const GridAxis& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<double> GridSpec::Point(std::size_t index) const {
  std::vector<double> point(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t size = axes[k].values.size();
    point[k] = axes[k].values[index % size];
    index /= size;
  }
  return point;
}

AgentSpec GridSpec::Apply(const std::vector<double>& point) const {
  AgentSpec spec = base;
  std::optional<double> ratio;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k].name == kBetaRatioAxis) {
      ratio = point[k];
    } else {
      spec.Set(axes[k].name, point[k]);
    }
  }
  if (ratio) spec.beta = *ratio * spec.alpha;
  return spec;
}

GridSpec DefaultGrid(Algorithm algorithm, PresetBank bank) {
  GridSpec grid;
  grid.base = Preset(algorithm, bank);
  auto& axes = grid.axes;
  switch (algorithm) {
    case Algorithm::kInfoQ:
      axes = {{"sender_alpha", kStepSizes}, {"receiver_alpha", kStepSizes}};
      break;
    case Algorithm::kInfoPolicy:
      axes = {{"sender_alpha", kStepSizes}, {"policy_step", {0.1, 0.5}}};
      break;
    case Algorithm::kApproxInfo:
      axes = {{"policy_step", {0.5, 2, 8}},
              {"mu", {0.5, 0.9, 0.99, 0.999}},
              {"rollout", {1, 10}}};
      break;
    case Algorithm::kIql:
    case Algorithm::kModelS:
    case Algorithm::kModelR:
      axes = {{"alpha", kStepSizes}, {"epsilon", kInitialEpsilons}};
      break;
    case Algorithm::kIq:
      axes = {{"alpha", kStepSizes},
              {"epsilon", kInitialEpsilons},
              {"period", {1, 10, 100}}};
      break;
    case Algorithm::kHysteretic:
      axes = {{"alpha", kStepSizes},
              {"epsilon", kInitialEpsilons},
              {std::string(kBetaRatioAxis), {0.1, 1, 10}}};
      break;
    case Algorithm::kLenience:
      axes = {{"alpha", kStepSizes},
              {"temp_decay", {0.999, 0.995, 0.99}},
              {"max_temp", {5, 50, 500, 5000}},
              {"omega", {0.1, 1, 10}},
              {"theta", {0.1, 1, 10}}};
      break;
    case Algorithm::kCommBias:
      axes = {{"policy_step", {0.1, 0.5}},
              {"signaling_weight", {0.001, 0.01, 0.1}},
              {"lambda", {0.1, 0.3, 1.0}},
              {"entropy_target", {0.0, 0.5, 1.0, 1.5}}};
      break;
  }
  return grid;
}

bool RanksAbove(const TuningRow& a, const TuningRow& b) {
  if (a.pct_optimal != b.pct_optimal) return a.pct_optimal > b.pct_optimal;
  if (a.mean_reward != b.mean_reward) return a.mean_reward > b.mean_reward;
  return a.point < b.point;
}

std::size_t SelectBest(const std::vector<TuningRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty tuning table");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (RanksAbove(rows[i], rows[best])) best = i;
  }
  return best;
}

TuningResult GridSearch(const GridSpec& grid, const TuneSettings& settings) {
  grid.Validate();
  TuningResult result;
  for (const GridAxis& axis : grid.axes) result.axis_names.push_back(axis.name);

  ExperimentConfig config;
  config.games = RandomGames(settings.size, settings.matrices,
                             settings.master_seed, kTuningPool);
  config.episodes = settings.episodes;
  config.eval_every = settings.eval_every;
  config.runs_per_matrix = settings.runs_per_matrix;
  config.master_seed = settings.master_seed;
  config.seed_pool = kTuningPool;
  config.threads = settings.threads;

  for (std::size_t i = 0; i < grid.Cardinality(); ++i) {
    TuningRow row;
    row.point = grid.Point(i);
    config.agent = grid.Apply(row.point);
    try {
      const AggregateSummary summary = RunExperiment(config);
      row.runs = summary.runs;
      row.optimal_runs = summary.optimal_runs;
      row.failures = summary.failures;
      row.pct_optimal = summary.final_point().pct_optimal;
      row.mean_reward = summary.final_point().mean_greedy_reward;
    } catch (const std::runtime_error&) {
      // Every run diverged; the point scores zero.
      row.failures = static_cast<std::int64_t>(settings.matrices) *
                     settings.runs_per_matrix;
    }
    result.rows.push_back(std::move(row));
  }
  result.best = SelectBest(result.rows);
  result.best_spec = grid.Apply(result.rows[result.best].point);
  return result;
}

std::string TuningCsv(const TuningResult& result) {
  std::string out;
  for (const std::string& name : result.axis_names) out += name + ',';
  out += "runs,optimal_runs,failures,pct_optimal,mean_reward\n";
  for (const TuningRow& row : result.rows) {
    for (double v : row.point) out += FormatNumber(v) + ',';
    out += std::to_string(row.runs) + ',' + std::to_string(row.optimal_runs) + ',' +
           std::to_string(row.failures) + ',' + FormatNumber(row.pct_optimal) + ',' +
           FormatNumber(row.mean_reward) + '\n';
  }
  return out;
}

nlohmann::ordered_json BestJson(const TuningResult& result,
                                const TuneSettings& settings) {
  const TuningRow& row = result.rows[result.best];
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["algorithm"] = AlgorithmName(result.best_spec.algorithm);
  nlohmann::ordered_json point;
  for (std::size_t k = 0; k < result.axis_names.size(); ++k) {
    point[result.axis_names[k]] = row.point[k];
  }
  j["grid_point"] = point;
  nlohmann::ordered_json params;
  for (std::string_view name : AllParamNames()) {
    params[std::string(name)] = result.best_spec.Get(name);
  }
  j["params"] = params;
  j["pct_optimal"] = row.pct_optimal;
  j["mean_reward"] = row.mean_reward;
  j["runs"] = row.runs;
  j["grid_size"] = result.rows.size();
  j["settings"] = {{"size", settings.size},
                   {"matrices", settings.matrices},
                   {"runs", settings.runs_per_matrix},
                   {"episodes", settings.episodes},
                   {"eval_every", settings.eval_every},
                   {"seed", settings.master_seed}};
  return j;
}

GridSpec ParseGridToml(std::string_view text, Algorithm algorithm,
                       PresetBank bank) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "grid file line " << e.source().begin.line << ": " << e.description();
    throw std::invalid_argument(msg.str());
  }
  GridSpec grid;
  grid.base = Preset(algorithm, bank);
  for (const auto& [key, node] : doc) {
    if (key.str() != "axis") {
      throw std::invalid_argument("grid file line " +
                                  std::to_string(node.source().begin.line) +
                                  ": unknown key '" + std::string(key.str()) + "'");
    }
  }
  const toml::array* axes = doc["axis"].as_array();
  if (axes == nullptr) throw std::invalid_argument("grid file has no [[axis]] tables");
  for (const toml::node& node : *axes) {
    const toml::table* table = node.as_table();
    const std::string where =
        "grid file line " + std::to_string(node.source().begin.line) + ": ";
    if (table == nullptr) throw std::invalid_argument(where + "axis must be a table");
    GridAxis axis;
    for (const auto& [key, value] : *table) {
      if (key.str() == "name") {
        const auto name = value.value<std::string>();
        if (!name) throw std::invalid_argument(where + "axis name must be a string");
        axis.name = *name;
      } else if (key.str() == "values") {
        const toml::array* values = value.as_array();
        if (values == nullptr) {
          throw std::invalid_argument(where + "axis values must be an array");
        }
        for (const toml::node& v : *values) {
          const auto number = v.value<double>();
          if (!number) throw std::invalid_argument(where + "axis values must be numbers");
          axis.values.push_back(*number);
        }
      } else {
        throw std::invalid_argument(where + "unknown key '" + std::string(key.str()) +
                                    "'");
      }
    }
    grid.axes.push_back(std::move(axis));
  }
  grid.Validate();
  return grid;
}

}  // namespace sigbench
