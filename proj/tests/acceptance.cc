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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sigbench/harness.h"
#include "sigbench/inference.h"
#include "sigbench/learners.h"
#include "sigbench/output.h"
#include "sigbench/rng.h"
#include "sigbench/tuner.h"

namespace fs = std::filesystem;

namespace sigbench {
namespace {

// Criterion 1.
constexpr int kClimbingRuns = 1000;
constexpr std::int64_t kClimbingEpisodes = 1000;
constexpr std::uint64_t kClimbingSeed = 7;
constexpr double kClimbingFinalPct = 0.99;
constexpr std::int64_t kClimbingEarlyEpisode = 500;
constexpr double kClimbingEarlyPct = 0.95;
// Criterion 2.
constexpr double kDistinctMessageMass = 0.99;
// Criterion 3.
constexpr double kIqlGap = 0.10;
// Criterion 4.
constexpr int kRandomMatrices = 100;
constexpr int kRandomRuns = 200;
constexpr std::int64_t kRandomEpisodes = 1000;
constexpr std::uint64_t kRandomSeed = 11;
constexpr double kInfoQMedian = 0.95;
// Criterion 5.
constexpr int kLargeMatrices = 5;
constexpr int kLargeRuns = 20;
constexpr std::int64_t kLargeEpisodes = 25000;
constexpr std::int64_t kLargeEvalEvery = 250;
constexpr std::uint64_t kLargeSeed = 13;
constexpr double kLargeReward = 0.95;
// Criterion 6.
constexpr int kOracleInstances = 1000;
constexpr int kOracleMaxStates = 5;
constexpr double kOracleTolerance = 1e-12;
// Criterion 7.
constexpr int kGradientInstances = 100;
constexpr double kFdStep = 1e-5;
constexpr double kFdRelTolerance = 1e-4;
// Criterion 8.
constexpr double kSweepSumTolerance = 1e-9;
// Criterion 10.
constexpr int kTuneMatrices = 10;
constexpr int kTuneRuns = 50;
// Criterion 11.
constexpr double kInjectiveFraction = 0.90;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// --- Shared sweeps ----------------------------------------------------------

const AggregateSummary& Climbing(Algorithm algorithm) {
  static std::map<Algorithm, AggregateSummary> cache;
  auto it = cache.find(algorithm);
  if (it == cache.end()) {
    ExperimentConfig ec;
    ec.games = ClimbingGames();
    ec.agent = Preset(algorithm, PresetBank::k3x3);
    ec.episodes = kClimbingEpisodes;
    ec.eval_every = 10;
    ec.runs_per_matrix = kClimbingRuns;
    ec.master_seed = kClimbingSeed;
    ec.threads = Threads();
    it = cache.emplace(algorithm, RunExperiment(ec)).first;
  }
  return it->second;
}

const AggregateSummary& Random3(Algorithm algorithm) {
  static std::map<Algorithm, AggregateSummary> cache;
  static const std::vector<SignalingGame> games =
      RandomGames(3, kRandomMatrices, kRandomSeed);
  auto it = cache.find(algorithm);
  if (it == cache.end()) {
    ExperimentConfig ec;
    ec.games = games;
    ec.agent = Preset(algorithm, PresetBank::k3x3);
    ec.episodes = kRandomEpisodes;
    ec.eval_every = 10;
    ec.runs_per_matrix = kRandomRuns;
    ec.master_seed = kRandomSeed;
    ec.threads = Threads();
    it = cache.emplace(algorithm, RunExperiment(ec)).first;
  }
  return it->second;
}

// --- Criteria -----------------------------------------------------------------

Outcome ClimbingConvergence() {
  const AggregateSummary& s = Climbing(Algorithm::kInfoQ);
  double early = -1.0;
  for (const CurvePoint& p : s.curve) {
    if (p.episode == kClimbingEarlyEpisode) early = p.pct_optimal;
  }
  const double final_pct = s.final_point().pct_optimal;
  return {final_pct >= kClimbingFinalPct && early >= kClimbingEarlyPct,
          Fmt("final pct_optimal %.4f (>= %.2f), at episode %lld %.4f (>= %.2f)",
              final_pct, kClimbingFinalPct, static_cast<long long>(kClimbingEarlyEpisode),
              early, kClimbingEarlyPct)};
}

Outcome ClimbingMessaging() {
  const AggregateSummary& s = Climbing(Algorithm::kInfoQ);
  const auto it = s.partitions.find("{s1}{s2}{s3}");
  const double mass =
      it == s.partitions.end() ? 0.0 : static_cast<double>(it->second) / s.runs;
  return {mass >= kDistinctMessageMass,
          Fmt("{s1}{s2}{s3} mass %.4f (>= %.2f)", mass, kDistinctMessageMass)};
}

Outcome ClimbingIqlPathology() {
  const AggregateSummary& info = Climbing(Algorithm::kInfoQ);
  const AggregateSummary& iql = Climbing(Algorithm::kIql);
  const double gap = info.final_point().pct_optimal - iql.final_point().pct_optimal;
  const double s2a3 = iql.counts(1, 2);
  std::int64_t shared = 0;
  for (const auto& [signature, count] : iql.partitions) {
    if (signature != "{s1}{s2}{s3}") shared += count;
  }
  return {gap >= kIqlGap && s2a3 > 0 && shared > 0,
          Fmt("pct gap %.4f (>= %.2f), count(s2,a3) %.0f (> 0), non-singleton runs %lld (> 0)",
              gap, kIqlGap, s2a3, static_cast<long long>(shared))};
}

Outcome RandomDominance() {
  const double info = Random3(Algorithm::kInfoQ).matrix_box.median;
  bool pass = info >= kInfoQMedian;
  std::string detail = Fmt("info-q median %.4f (>= %.2f); baselines:", info, kInfoQMedian);
  for (Algorithm a : {Algorithm::kIql, Algorithm::kIq, Algorithm::kModelS, Algorithm::kModelR,
                      Algorithm::kHysteretic, Algorithm::kLenience, Algorithm::kCommBias}) {
    const double median = Random3(a).matrix_box.median;
    pass = pass && info > median;
    detail += Fmt(" %s %.4f", std::string(AlgorithmName(a)).c_str(), median);
  }
  return {pass, detail};
}

Outcome LargeSmoke() {
  ExperimentConfig ec;
  ec.games = RandomGames(32, kLargeMatrices, kLargeSeed);
  ec.agent = Preset(Algorithm::kInfoQ, PresetBank::k32x32);
  ec.episodes = kLargeEpisodes;
  ec.eval_every = kLargeEvalEvery;
  ec.runs_per_matrix = kLargeRuns;
  ec.master_seed = kLargeSeed;
  ec.threads = Threads();
  const AggregateSummary s = RunExperiment(ec);
  const double reward = s.final_point().mean_norm_reward;
  return {reward >= kLargeReward,
          Fmt("final mean normalized reward %.4f (>= %.2f), greedy %.4f", reward,
              kLargeReward, s.final_point().mean_greedy_reward)};
}

// Brute-force Bayes: p(s|m) from the joint p(s) p(m|s) in extended precision.
Outcome PosteriorOracle() {
  Rng rng(606);
  int mismatched_values = 0;
  int mismatched_sets = 0;
  double worst = 0.0;
  for (int instance = 0; instance < kOracleInstances; ++instance) {
    const int n = 1 + UniformIndex(rng, kOracleMaxStates);
    const int messages = 1 + UniformIndex(rng, kOracleMaxStates);
    std::vector<double> prior(n);
    for (double& p : prior) p = UniformIndex(rng, 4) == 0 ? 0.0 : Uniform01(rng);
    prior[UniformIndex(rng, n)] += 0.5;
    const double total = std::accumulate(prior.begin(), prior.end(), 0.0);
    for (double& p : prior) p /= total;
    DeterministicMessagePolicy policy;
    policy.num_messages = messages;
    policy.assignment.resize(n);
    for (Message& m : policy.assignment) m = UniformIndex(rng, messages);

    const Table scores = ScaledPosterior(policy, prior);
    for (int s = 0; s < n; ++s) {
      std::vector<double> oracle(messages);
      for (int m = 0; m < messages; ++m) {
        long double evidence = 0;
        for (int x = 0; x < n; ++x) {
          evidence += static_cast<long double>(prior[x]) * (policy.assignment[x] == m ? 1 : 0);
        }
        if (evidence == 0) {
          oracle[m] = 1.0;  // unused message
        } else {
          const long double likelihood = policy.assignment[s] == m ? 1 : 0;
          oracle[m] = static_cast<double>(likelihood / evidence);
        }
        const double err = std::abs(scores(s, m) - oracle[m]);
        worst = std::max(worst, err);
        if (err > kOracleTolerance) ++mismatched_values;
      }
      const double best = *std::max_element(oracle.begin(), oracle.end());
      std::set<int> oracle_set;
      for (int m = 0; m < messages; ++m) {
        if (std::abs(oracle[m] - best) <= kOracleTolerance) oracle_set.insert(m);
      }
      std::vector<int> argmax;
      ArgmaxSet(scores.row(s), &argmax);
      if (std::set<int>(argmax.begin(), argmax.end()) != oracle_set) ++mismatched_sets;
    }
  }
  return {mismatched_values == 0 && mismatched_sets == 0,
          Fmt("%d instances, max abs error %.3g (<= %.0e), value mismatches %d, "
              "maximizer-set mismatches %d",
              kOracleInstances, worst, kOracleTolerance, mismatched_values, mismatched_sets)};
}

std::vector<double> SoftmaxOf(const std::vector<double>& logits) {
  std::vector<double> p(logits.size());
  Softmax(logits, p);
  return p;
}

Outcome GradientChecks() {
  Rng rng(707);
  double worst = 0.0;
  int checked = 0;
  auto check = [&](double analytic, double numeric) {
    worst = std::max(worst, RelativeError(analytic, numeric));
    ++checked;
  };
  for (int instance = 0; instance < kGradientInstances; ++instance) {
    // Softmax log-gradient and the importance-weighted form.
    const int n = 2 + UniformIndex(rng, 5);
    const int u = UniformIndex(rng, n);
    std::vector<double> logits(n);
    for (double& x : logits) x = 4.0 * Uniform01(rng) - 2.0;
    const std::vector<double> probs = SoftmaxOf(logits);
    std::vector<double> log_grad(n);
    LogSoftmaxGradient(probs, u, log_grad);
    for (int k = 0; k < n; ++k) {
      std::vector<double> plus = logits, minus = logits;
      plus[k] += kFdStep;
      minus[k] -= kFdStep;
      const std::vector<double> pp = SoftmaxOf(plus), pm = SoftmaxOf(minus);
      check(log_grad[k], (std::log(pp[u]) - std::log(pm[u])) / (2 * kFdStep));
      const double rho = ImportanceWeight(probs, u);
      check(rho * log_grad[k], (pp[u] - pm[u]) / (2 * kFdStep));
    }

    // Signaling gradient.
    const int states = 1 + UniformIndex(rng, 4);
    const int messages = 2 + UniformIndex(rng, 4);
    const double lambda = Uniform01(rng);
    const double target = 1.5 * Uniform01(rng);
    std::vector<double> w(states);
    for (double& x : w) x = 0.1 + Uniform01(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    Table table(states, messages);
    for (int s = 0; s < states; ++s) {
      for (int m = 0; m < messages; ++m) table(s, m) = 4.0 * Uniform01(rng) - 2.0;
    }
    Table grad;
    SignalingGradient(SoftmaxProbabilities(table), w, lambda, target, &grad);
    for (int s = 0; s < states; ++s) {
      for (int m = 0; m < messages; ++m) {
        Table plus = table, minus = table;
        plus(s, m) += kFdStep;
        minus(s, m) -= kFdStep;
        const double fd =
            (SignalingObjective(SoftmaxProbabilities(plus), w, lambda, target).objective -
             SignalingObjective(SoftmaxProbabilities(minus), w, lambda, target).objective) /
            (2 * kFdStep);
        check(grad(s, m), fd);
      }
    }
  }
  return {worst <= kFdRelTolerance,
          Fmt("%d instances, %d partials, max relative error %.3g (<= %.0e)",
              kGradientInstances, checked, worst, kFdRelTolerance)};
}

Outcome EstimatorProperties() {
  Rng rng(808);
  double worst_sum = 0.0;
  bool positive = true;
  int argmax_mismatch = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + UniformIndex(rng, 8);
    const int rollout = 1 + UniformIndex(rng, 16);
    MarginalEstimate sweep(n, 0.9 * Uniform01(rng), AccumulationMode::kFullSweep);
    MarginalEstimate literal(n, trial % 5 == 0 ? 0.0 : Uniform01(rng) * 0.999,
                             AccumulationMode::kPseudocodeLiteral);
    for (int r = 0; r < 20; ++r) {
      for (int t = 0; t < rollout; ++t) {
        std::vector<double> row(n);
        if (UniformIndex(rng, 3) == 0) {
          std::fill(row.begin(), row.end(), 0.0);
          row[UniformIndex(rng, n)] = 1.0;
        } else {
          for (double& v : row) v = Uniform01(rng) + 1e-3;
          const double sum = std::accumulate(row.begin(), row.end(), 0.0);
          for (double& v : row) v /= sum;
        }
        sweep.Accumulate(UniformIndex(rng, n), row, rollout);
        literal.Accumulate(UniformIndex(rng, n), row, rollout);
      }
      const auto mean = sweep.rollout_mean();
      worst_sum = std::max(worst_sum,
                           std::abs(std::accumulate(mean.begin(), mean.end(), 0.0) - 1.0));
      sweep.Finalize();
      literal.Finalize();
      for (double v : sweep.estimate()) positive = positive && v > 0.0;
      for (double v : literal.estimate()) positive = positive && v > 0.0;
    }
    // Uniform p_hat: scaled and unscaled argmax agree.
    const MarginalEstimate uniform(n, 0.5);
    std::vector<double> row(n), scaled(n);
    for (double& v : row) v = static_cast<double>(UniformIndex(rng, 4));  // ties
    ScaledScoreRow(row, uniform, scaled);
    std::vector<int> a, b;
    ArgmaxSet(row, &a);
    ArgmaxSet(scaled, &b);
    if (a != b) ++argmax_mismatch;
  }
  return {worst_sum <= kSweepSumTolerance && positive && argmax_mismatch == 0,
          Fmt("max |sum p_bar - 1| %.3g (<= %.0e), p_hat positive %s, "
              "uniform-p_hat argmax mismatches %d",
              worst_sum, kSweepSumTolerance, positive ? "yes" : "no", argmax_mismatch)};
}

std::map<std::string, std::string> ReadTree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = s.str();
  }
  return files;
}

Outcome ThreadDeterminism() {
  const fs::path root = fs::temp_directory_path() / "sigbench_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> trees;
  const std::vector<SignalingGame> games = RandomGames(3, 8, 99);
  for (int threads : {1, 4, 8}) {
    std::vector<LabeledSummary> summaries;
    nlohmann::ordered_json summary;
    for (Algorithm a : AllAlgorithms()) {
      ExperimentConfig ec;
      ec.games = games;
      ec.agent = Preset(a, PresetBank::k3x3);
      ec.episodes = 300;
      ec.eval_every = 30;
      ec.runs_per_matrix = 40;
      ec.master_seed = 99;
      ec.threads = threads;
      summaries.push_back({std::string(AlgorithmName(a)), "all", RunExperiment(ec)});
      summary[std::string(AlgorithmName(a))] = SummaryJson(summaries.back().summary);
    }
    const fs::path dir = root / std::to_string(threads);
    WriteExperimentFiles(dir, summaries);
    WriteFile(dir / "summary.json", summary.dump(2) + "\n");
    trees.push_back(ReadTree(dir));
  }
  fs::remove_all(root);
  const bool same = trees[0] == trees[1] && trees[0] == trees[2];
  return {same, Fmt("%zu files compared across 1, 4 and 8 threads: %s", trees[0].size(),
                    same ? "byte-identical" : "differ")};
}

Outcome TunerSanity() {
  // Degenerate grid.
  TuneSettings tiny;
  tiny.matrices = 2;
  tiny.runs_per_matrix = 5;
  tiny.episodes = 100;
  tiny.eval_every = 10;
  tiny.threads = Threads();
  GridSpec one;
  one.base = Preset(Algorithm::kIql, PresetBank::k3x3);
  one.axes = {{"alpha", {0.1}}};
  const TuningResult single = GridSearch(one, tiny);
  const bool degenerate = single.rows.size() == 1 && single.best == 0;

  // Two-point grids at each level of the tie-break chain.
  const TuningRow lo{{0.1}, 100, 50, 0, 0.5, 0.8};
  TuningRow hi = lo;
  hi.point = {0.5};
  hi.pct_optimal = 0.6;
  const bool by_pct = SelectBest({lo, hi}) == 1;
  hi.pct_optimal = 0.5;
  hi.mean_reward = 0.9;
  const bool by_reward = SelectBest({lo, hi}) == 1;
  hi.mean_reward = 0.8;
  const bool by_order = SelectBest({hi, lo}) == 1;

  // No learning against the preset.
  const AgentSpec preset = Preset(Algorithm::kIql, PresetBank::k3x3);
  GridSpec pair;
  pair.base = preset;
  pair.axes = {{"alpha", {0.0, preset.alpha}}};
  TuneSettings settings;
  settings.matrices = kTuneMatrices;
  settings.runs_per_matrix = kTuneRuns;
  settings.episodes = 1000;
  settings.eval_every = 100;
  settings.master_seed = 5;
  settings.threads = Threads();
  const TuningResult r = GridSearch(pair, settings);
  const bool learning_wins =
      r.rows[0].pct_optimal <= r.rows[1].pct_optimal && r.best == 1;
  return {degenerate && by_pct && by_reward && by_order && learning_wins,
          Fmt("degenerate %s, tie chain pct/reward/order %s/%s/%s, no-learning %.4f vs "
              "preset %.4f (%d x %d)",
              degenerate ? "ok" : "bad", by_pct ? "ok" : "bad", by_reward ? "ok" : "bad",
              by_order ? "ok" : "bad", r.rows[0].pct_optimal, r.rows[1].pct_optimal,
              kTuneMatrices, kTuneRuns)};
}

Outcome ApproxInjective() {
  const AggregateSummary& s = Random3(Algorithm::kApproxInfo);
  return {s.injective_fraction >= kInjectiveFraction,
          Fmt("approx-info injective fraction %.4f (>= %.2f) over %lld runs; gridworld "
              "results are out of scope",
              s.injective_fraction, kInjectiveFraction, static_cast<long long>(s.runs))};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace sigbench

int main(int argc, char** argv) {
  using namespace sigbench;
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  app.add_option("criteria", only, "Criterion ids to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "climbing info-q convergence", ClimbingConvergence},
      {2, "climbing info-q distinct messages", ClimbingMessaging},
      {3, "climbing iql pathology", ClimbingIqlPathology},
      {4, "random 3x3 dominance", RandomDominance},
      {5, "random 32x32 smoke", LargeSmoke},
      {6, "posterior oracle equivalence", PosteriorOracle},
      {7, "gradient checks", GradientChecks},
      {8, "marginal estimator properties", EstimatorProperties},
      {9, "thread-count determinism", ThreadDeterminism},
      {10, "tuner sanity", TunerSanity},
      {11, "approximate sender injectivity", ApproxInjective},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += outcome.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
