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

#ifndef SIGBENCH_HARNESS_H_
#define SIGBENCH_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigbench/agent_spec.h"
#include "sigbench/agents.h"
#include "sigbench/game.h"

namespace sigbench {

// Where a run's payoff matrix comes from.
struct GameSource {
  enum class Kind { kClimbing, kRandom };
  Kind kind = Kind::kClimbing;
  int size = 3;
  std::uint64_t matrix_seed = 0;
};

SignalingGame BuildGame(const GameSource& source);

struct RunConfig {
  GameSource game;
  AgentSpec agent;
  std::int64_t episodes = 1000;
  std::int64_t eval_every = 10;
  std::uint64_t run_seed = 0;
  FixedAgent fixed = FixedAgent::kNone;

  // Throws std::invalid_argument.
  void Validate() const;
};

// Reporting grid: every multiple of `eval_every` up to `episodes`, plus
// `episodes` itself when it is not a multiple.
std::vector<std::int64_t> EvaluationGrid(std::int64_t episodes,
                                         std::int64_t eval_every);

// Deterministic joint policy: state -> message -> action.
struct JointPolicy {
  std::vector<Message> messages;  // by state
  std::vector<Action> actions;    // by state, after the message

  bool operator==(const JointPolicy&) const = default;
};

// One point of the reporting grid. Reward means cover the training episodes
// since the previous point; `greedy_norm_reward` and `optimal` come from a
// greedy evaluation sweep at that point.
struct GridPoint {
  std::int64_t episode = 0;
  double mean_raw_reward = 0.0;
  double mean_norm_reward = 0.0;
  double greedy_norm_reward = 0.0;
  bool optimal = false;

  bool operator==(const GridPoint&) const = default;
};

struct RunResult {
  std::vector<GridPoint> trace;
  JointPolicy policy;
  bool optimal = false;
  std::optional<std::int64_t> episodes_to_optimal;
  std::string partition;
  bool failed = false;
  std::string failure;

  bool operator==(const RunResult&) const = default;
};

RunResult RunTraining(const RunConfig& config);
// Same, reusing an already built game (must match `config.game`).
RunResult RunTraining(const RunConfig& config, const SignalingGame& game);

// Never mutates either agent; ties resolve to the lowest index.
JointPolicy EvaluateGreedyPolicy(const Sender& sender, const Receiver& receiver,
                                 const SignalingGame& game);

bool IsOptimal(const JointPolicy& policy, const SignalingGame& game);

// Mean over states of R(s, a(s)) / max_a R(s, a).
double GreedyNormalizedReward(const JointPolicy& policy, const SignalingGame& game);

// Canonical grouping of states that share a message, e.g. "{s1,s2}{s3}".
// Classes are ordered by their smallest state; states are 1-based.
std::string PartitionSignature(const std::vector<Message>& messages);

// Running mean and sum of squared deviations with Chan's merge.
class Moments {
 public:
  void Add(double x);
  void Merge(const Moments& other);

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Sample variance (n - 1); 0 for fewer than two values.
  double variance() const;
  double stderr_mean() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Min, quartiles by linear interpolation between order statistics, max.
struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quantile q in [0, 1] of `values` by linear interpolation at (n - 1) q.
double Quantile(std::vector<double> values, double q);
BoxStats ComputeBoxStats(const std::vector<double>& values);

struct AggregateSummary;

// Partial aggregate over a contiguous block of runs. Merging blocks in index
// order gives results independent of how the blocks were scheduled.
class Aggregator {
 public:
  Aggregator(std::vector<std::int64_t> grid, int num_matrices, int num_states,
             int num_actions);

  void Add(int matrix_index, const RunResult& result);
  void Merge(const Aggregator& other);

  const std::vector<std::int64_t>& grid() const { return grid_; }

 private:
  friend AggregateSummary Summarize(const Aggregator& aggregator);

  std::vector<std::int64_t> grid_;
  std::vector<Moments> raw_;
  std::vector<Moments> norm_;
  std::vector<Moments> greedy_;
  std::vector<std::int64_t> optimal_;
  std::vector<std::int64_t> matrix_runs_;
  std::vector<std::int64_t> matrix_optimal_;
  int num_actions_;
  std::vector<std::int64_t> counts_;
  std::map<std::string, std::int64_t> partitions_;
  Moments episodes_to_optimal_;
  std::int64_t injective_ = 0;
  std::int64_t succeeded_ = 0;
  std::int64_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct CurvePoint {
  std::int64_t episode = 0;
  double mean_raw_reward = 0.0;
  double mean_norm_reward = 0.0;
  double stderr_norm_reward = 0.0;
  double mean_greedy_reward = 0.0;
  double pct_optimal = 0.0;  // fraction in [0, 1]
};

struct AggregateSummary {
  std::vector<CurvePoint> curve;
  std::vector<double> matrix_pct_optimal;  // one per matrix
  BoxStats matrix_box;
  Table counts;  // pooled final (state, action) counts
  std::map<std::string, std::int64_t> partitions;
  std::int64_t runs = 0;  // successful runs
  std::int64_t optimal_runs = 0;  // final policy optimal
  std::int64_t failures = 0;
  std::vector<std::string> failure_messages;  // first few diagnostics
  double injective_fraction = 0.0;
  std::int64_t converged_runs = 0;
  double mean_episodes_to_optimal = 0.0;

  const CurvePoint& final_point() const { return curve.back(); }
};

// Throws std::runtime_error if every run failed.
AggregateSummary Summarize(const Aggregator& aggregator);

struct ExperimentConfig {
  std::vector<SignalingGame> games;
  AgentSpec agent;
  std::int64_t episodes = 1000;
  std::int64_t eval_every = 10;
  int runs_per_matrix = 1000;
  std::uint64_t master_seed = 0;
  // Run-seed pool; experiments in different pools never share run seeds.
  std::uint64_t seed_pool = 0;
  int threads = 1;
  FixedAgent fixed = FixedAgent::kNone;
};

// Runs per block of the ordered reduction. Fixed so that output does not
// depend on the thread count.
inline constexpr int kRunsPerChunk = 25;

std::uint64_t ExperimentRunSeed(const ExperimentConfig& config, int matrix_index,
                                int run_index);

AggregateSummary RunExperiment(const ExperimentConfig& config);

// Climbing game alone, or `count` random n x n games from matrix pool `pool`.
std::vector<SignalingGame> ClimbingGames();
std::vector<SignalingGame> RandomGames(int n, int count, std::uint64_t master_seed,
                                       std::uint64_t pool = 0);

}  // namespace sigbench

#endif  // SIGBENCH_HARNESS_H_
