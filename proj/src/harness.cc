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

#include "sigbench/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sigbench/rng.h"

namespace sigbench {
namespace {

constexpr std::size_t kMaxFailureMessages = 10;

}  // namespace

SignalingGame BuildGame(const GameSource& source) {
  if (source.kind == GameSource::Kind::kClimbing) return ClimbingGame();
  Rng rng(source.matrix_seed);
  return GenerateRandomGame(source.size, rng);
}

void RunConfig::Validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (eval_every < 1) throw std::invalid_argument("eval cadence must be >= 1");
  agent.Validate();
}

std::vector<std::int64_t> EvaluationGrid(std::int64_t episodes,
                                         std::int64_t eval_every) {
  if (episodes < 1 || eval_every < 1) {
    throw std::invalid_argument("episodes and eval cadence must be >= 1");
  }
  std::vector<std::int64_t> grid;
  for (std::int64_t t = eval_every; t <= episodes; t += eval_every) {
    grid.push_back(t);
  }
  if (grid.empty() || grid.back() != episodes) grid.push_back(episodes);
  return grid;
}

JointPolicy EvaluateGreedyPolicy(const Sender& sender, const Receiver& receiver,
                                 const SignalingGame& game) {
  JointPolicy policy;
  for (State s = 0; s < game.num_states(); ++s) {
    const Message m = sender.GreedyMessage(s);
    policy.messages.push_back(m);
    policy.actions.push_back(receiver.GreedyAction(m));
  }
  return policy;
}

bool IsOptimal(const JointPolicy& policy, const SignalingGame& game) {
  for (State s = 0; s < game.num_states(); ++s) {
    if (!game.IsOptimalAction(s, policy.actions[s])) return false;
  }
  return true;
}

double GreedyNormalizedReward(const JointPolicy& policy, const SignalingGame& game) {
  double total = 0.0;
  for (State s = 0; s < game.num_states(); ++s) {
    total += game.NormalizedReward(s, policy.actions[s]);
  }
  return total / game.num_states();
}

std::string PartitionSignature(const std::vector<Message>& messages) {
  std::vector<bool> done(messages.size(), false);
  std::string out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (done[i]) continue;
    out += '{';
    bool first = true;
    for (std::size_t j = i; j < messages.size(); ++j) {
      if (done[j] || messages[j] != messages[i]) continue;
      done[j] = true;
      if (!first) out += ',';
      out += 's' + std::to_string(j + 1);
      first = false;
    }
    out += '}';
  }
  return out;
}

RunResult RunTraining(const RunConfig& config) {
  config.Validate();
  return RunTraining(config, BuildGame(config.game));
}

RunResult RunTraining(const RunConfig& config, const SignalingGame& game) {
  config.Validate();
  RunResult result;
  AgentPair agents = MakeAgents(config.agent, game, config.run_seed, config.fixed);
  Rng env(SubstreamSeed(config.run_seed, Stream::kEnvironment));
  const std::vector<std::int64_t> grid =
      EvaluationGrid(config.episodes, config.eval_every);

  try {
    std::int64_t t = 0;
    for (const std::int64_t point : grid) {
      double raw = 0.0;
      double norm = 0.0;
      const std::int64_t start = t;
      for (; t < point; ++t) {
        const State s = game.SampleState(env);
        const Message m = agents.sender->Act(s);
        const Action a = agents.receiver->Act(m);
        const StepResult step = game.Step(s, a);
        const Episode episode{s, m, a, step.reward};
        agents.sender->Learn(episode);
        agents.receiver->Learn(episode);
        raw += step.reward;
        norm += step.normalized_reward;
      }
      const double width = static_cast<double>(point - start);
      GridPoint gp;
      gp.episode = point;
      gp.mean_raw_reward = raw / width;
      gp.mean_norm_reward = norm / width;
      const JointPolicy policy =
          EvaluateGreedyPolicy(*agents.sender, *agents.receiver, game);
      gp.greedy_norm_reward = GreedyNormalizedReward(policy, game);
      gp.optimal = IsOptimal(policy, game);
      if (!std::isfinite(gp.mean_raw_reward)) {
        throw NonFiniteError("non-finite reward");
      }
      result.trace.push_back(gp);
    }
  } catch (const NonFiniteError& e) {
    result.failed = true;
    result.failure = e.what();
    result.trace.clear();
    return result;
  }

  result.policy = EvaluateGreedyPolicy(*agents.sender, *agents.receiver, game);
  result.optimal = IsOptimal(result.policy, game);
  result.partition = PartitionSignature(result.policy.messages);
  if (result.optimal) {
    std::size_t first = result.trace.size();
    while (first > 0 && result.trace[first - 1].optimal) --first;
    result.episodes_to_optimal = result.trace[first].episode;
  }
  return result;
}

// --- Statistics ---------------------------------------------------------------

void Moments::Add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Moments::Merge(const Moments& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double Moments::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double Moments::stderr_mean() const {
  return n_ < 1 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BoxStats ComputeBoxStats(const std::vector<double>& values) {
  BoxStats box;
  box.min = Quantile(values, 0.0);
  box.q1 = Quantile(values, 0.25);
  box.median = Quantile(values, 0.5);
  box.q3 = Quantile(values, 0.75);
  box.max = Quantile(values, 1.0);
  return box;
}

// --- Aggregation ---------------------------------------------------------------

Aggregator::Aggregator(std::vector<std::int64_t> grid, int num_matrices,
                       int num_states, int num_actions)
    : grid_(std::move(grid)),
      raw_(grid_.size()),
      norm_(grid_.size()),
      greedy_(grid_.size()),
      optimal_(grid_.size(), 0),
      matrix_runs_(num_matrices, 0),
      matrix_optimal_(num_matrices, 0),
      num_actions_(num_actions),
      counts_(static_cast<std::size_t>(num_states) * num_actions, 0) {}

void Aggregator::Add(int matrix_index, const RunResult& result) {
  if (result.failed) {
    ++failed_;
    if (failures_.size() < kMaxFailureMessages) failures_.push_back(result.failure);
    return;
  }
  if (result.trace.size() != grid_.size()) {
    throw std::logic_error("run trace does not match the reporting grid");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    raw_[i].Add(result.trace[i].mean_raw_reward);
    norm_[i].Add(result.trace[i].mean_norm_reward);
    greedy_[i].Add(result.trace[i].greedy_norm_reward);
    optimal_[i] += result.trace[i].optimal ? 1 : 0;
  }
  ++matrix_runs_[matrix_index];
  matrix_optimal_[matrix_index] += result.optimal ? 1 : 0;
  for (State s = 0; s < static_cast<int>(result.policy.actions.size()); ++s) {
    ++counts_[static_cast<std::size_t>(s) * num_actions_ + result.policy.actions[s]];
  }
  ++partitions_[result.partition];
  if (result.episodes_to_optimal) {
    episodes_to_optimal_.Add(static_cast<double>(*result.episodes_to_optimal));
  }
  std::vector<Message> sorted = result.policy.messages;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) ++injective_;
  ++succeeded_;
}

void Aggregator::Merge(const Aggregator& other) {
  if (other.grid_ != grid_ || other.counts_.size() != counts_.size() ||
      other.matrix_runs_.size() != matrix_runs_.size()) {
    throw std::logic_error("merging incompatible aggregates");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    raw_[i].Merge(other.raw_[i]);
    norm_[i].Merge(other.norm_[i]);
    greedy_[i].Merge(other.greedy_[i]);
    optimal_[i] += other.optimal_[i];
  }
  for (std::size_t k = 0; k < matrix_runs_.size(); ++k) {
    matrix_runs_[k] += other.matrix_runs_[k];
    matrix_optimal_[k] += other.matrix_optimal_[k];
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  for (const auto& [signature, count] : other.partitions_) {
    partitions_[signature] += count;
  }
  episodes_to_optimal_.Merge(other.episodes_to_optimal_);
  injective_ += other.injective_;
  succeeded_ += other.succeeded_;
  failed_ += other.failed_;
  for (const std::string& f : other.failures_) {
    if (failures_.size() < kMaxFailureMessages) failures_.push_back(f);
  }
}

AggregateSummary Summarize(const Aggregator& agg) {
  if (agg.succeeded_ == 0) {
    throw std::runtime_error("all " + std::to_string(agg.failed_) +
                             " runs failed; nothing to aggregate");
  }
  AggregateSummary out;
  const double n = static_cast<double>(agg.succeeded_);
  for (std::size_t i = 0; i < agg.grid_.size(); ++i) {
    CurvePoint p;
    p.episode = agg.grid_[i];
    p.mean_raw_reward = agg.raw_[i].mean();
    p.mean_norm_reward = agg.norm_[i].mean();
    p.stderr_norm_reward = agg.norm_[i].stderr_mean();
    p.mean_greedy_reward = agg.greedy_[i].mean();
    p.pct_optimal = static_cast<double>(agg.optimal_[i]) / n;
    out.curve.push_back(p);
  }
  for (std::size_t k = 0; k < agg.matrix_runs_.size(); ++k) {
    const std::int64_t runs = agg.matrix_runs_[k];
    out.matrix_pct_optimal.push_back(
        runs == 0 ? 0.0
                  : static_cast<double>(agg.matrix_optimal_[k]) /
                        static_cast<double>(runs));
  }
  out.matrix_box = ComputeBoxStats(out.matrix_pct_optimal);
  const int states = static_cast<int>(agg.counts_.size()) / agg.num_actions_;
  out.counts = Table(states, agg.num_actions_);
  for (int s = 0; s < states; ++s) {
    for (int a = 0; a < agg.num_actions_; ++a) {
      out.counts(s, a) = static_cast<double>(
          agg.counts_[static_cast<std::size_t>(s) * agg.num_actions_ + a]);
    }
  }
  out.partitions = agg.partitions_;
  out.runs = agg.succeeded_;
  out.optimal_runs = agg.optimal_.back();
  out.failures = agg.failed_;
  out.failure_messages = agg.failures_;
  out.injective_fraction = static_cast<double>(agg.injective_) / n;
  out.converged_runs = agg.episodes_to_optimal_.count();
  out.mean_episodes_to_optimal = agg.episodes_to_optimal_.mean();
  return out;
}

// --- Experiments ---------------------------------------------------------------

std::vector<SignalingGame> ClimbingGames() { return {ClimbingGame()}; }

std::vector<SignalingGame> RandomGames(int n, int count, std::uint64_t master_seed,
                                       std::uint64_t pool) {
  std::vector<SignalingGame> games;
  games.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng(MatrixSeed(master_seed, i, pool));
    games.push_back(GenerateRandomGame(n, rng));
  }
  return games;
}

std::uint64_t ExperimentRunSeed(const ExperimentConfig& config, int matrix_index,
                                int run_index) {
  const std::uint64_t master =
      config.seed_pool == 0 ? config.master_seed
                            : MixSeed(config.master_seed ^ MixSeed(~config.seed_pool));
  return DeriveRunSeed(master, matrix_index, run_index);
}

AggregateSummary RunExperiment(const ExperimentConfig& config) {
  if (config.games.empty()) throw std::invalid_argument("no games to run");
  if (config.runs_per_matrix < 1) throw std::invalid_argument("runs must be >= 1");
  if (config.threads < 1) throw std::invalid_argument("threads must be >= 1");
  const SignalingGame& first = config.games.front();
  for (const SignalingGame& g : config.games) {
    if (g.num_states() != first.num_states() ||
        g.num_actions() != first.num_actions()) {
      throw std::invalid_argument("all games of an experiment must share a shape");
    }
  }
  RunConfig base;
  base.agent = config.agent;
  base.episodes = config.episodes;
  base.eval_every = config.eval_every;
  base.fixed = config.fixed;
  base.Validate();

  const std::vector<std::int64_t> grid =
      EvaluationGrid(config.episodes, config.eval_every);
  const int num_matrices = static_cast<int>(config.games.size());
  const std::int64_t total =
      static_cast<std::int64_t>(num_matrices) * config.runs_per_matrix;
  const std::int64_t num_chunks = (total + kRunsPerChunk - 1) / kRunsPerChunk;
  const Aggregator empty(grid, num_matrices, first.num_states(), first.num_actions());
  std::vector<Aggregator> chunks(num_chunks, empty);

  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const std::int64_t chunk = next.fetch_add(1);
      if (chunk >= num_chunks) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        const std::int64_t end = std::min(total, (chunk + 1) * kRunsPerChunk);
        for (std::int64_t k = chunk * kRunsPerChunk; k < end; ++k) {
          const int matrix = static_cast<int>(k / config.runs_per_matrix);
          const int run = static_cast<int>(k % config.runs_per_matrix);
          RunConfig rc = base;
          rc.run_seed = ExperimentRunSeed(config, matrix, run);
          chunks[chunk].Add(matrix, RunTraining(rc, config.games[matrix]));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const int workers =
      static_cast<int>(std::min<std::int64_t>(config.threads, num_chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  Aggregator merged = empty;
  for (const Aggregator& chunk : chunks) merged.Merge(chunk);
  return Summarize(merged);
}

}  // namespace sigbench
