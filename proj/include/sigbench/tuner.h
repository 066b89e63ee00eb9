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

#ifndef SIGBENCH_TUNER_H_
#define SIGBENCH_TUNER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigbench/agent_spec.h"

namespace sigbench {

// Scales beta by alpha after all other axes are applied.
inline constexpr std::string_view kBetaRatioAxis = "beta_ratio";

struct GridAxis {
  std::string name;  // an AgentSpec parameter name or kBetaRatioAxis
  std::vector<double> values;
};

struct GridSpec {
  AgentSpec base;  // parameters not on an axis
  std::vector<GridAxis> axes;

  // Throws std::invalid_argument for an empty axis or unknown name.
  void Validate() const;
  std::size_t Cardinality() const;
  // Grid point `index` in row-major order (first axis varies slowest).
  std::vector<double> Point(std::size_t index) const;
  AgentSpec Apply(const std::vector<double>& point) const;
};

// Candidate sets for each algorithm on top of its preset for `bank`.
GridSpec DefaultGrid(Algorithm algorithm, PresetBank bank);

struct TuneSettings {
  int size = 3;
  int matrices = 100;
  int runs_per_matrix = 1000;
  std::int64_t episodes = 1000;
  std::int64_t eval_every = 10;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct TuningRow {
  std::vector<double> point;
  std::int64_t runs = 0;
  std::int64_t optimal_runs = 0;
  std::int64_t failures = 0;
  double pct_optimal = 0.0;
  double mean_reward = 0.0;  // final greedy per-state-normalized reward
};

struct TuningResult {
  std::vector<std::string> axis_names;
  std::vector<TuningRow> rows;
  std::size_t best = 0;
  AgentSpec best_spec;
};

// True when `a` ranks above `b`: higher pct-optimal, then higher mean
// reward, then the lexicographically smaller parameter vector.
bool RanksAbove(const TuningRow& a, const TuningRow& b);

// Index of the winning row. Throws std::invalid_argument on an empty table.
std::size_t SelectBest(const std::vector<TuningRow>& rows);

// Tuning matrices come from their own seed pool, disjoint from evaluation.
TuningResult GridSearch(const GridSpec& grid, const TuneSettings& settings);

std::string TuningCsv(const TuningResult& result);
nlohmann::ordered_json BestJson(const TuningResult& result,
                                const TuneSettings& settings);

// Reads a grid file: one [[axis]] table per axis with `name` and `values`.
// The base spec is the preset for `algorithm` and `bank`.
GridSpec ParseGridToml(std::string_view text, Algorithm algorithm,
                       PresetBank bank);

}  // namespace sigbench

#endif  // SIGBENCH_TUNER_H_
