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

#ifndef SIGBENCH_INFERENCE_H_
#define SIGBENCH_INFERENCE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sigbench/game.h"
#include "sigbench/rng.h"
#include "sigbench/table.h"

namespace sigbench {

// Visit counts N(s). p(s) = N(s) / sum N.
class EmpiricalPrior {
 public:
  explicit EmpiricalPrior(int num_states) : counts_(num_states, 0) {}

  void Observe(State s) {
    ++counts_[s];
    ++total_;
  }
  std::int64_t count(State s) const { return counts_[s]; }
  std::int64_t total() const { return total_; }
  int num_states() const { return static_cast<int>(counts_.size()); }

  // Throws std::logic_error when no state has been observed.
  std::vector<double> Probabilities() const;
  void Probabilities(std::span<double> out) const;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

inline std::vector<double> PriorProbabilities(const EmpiricalPrior& prior) {
  return prior.Probabilities();
}

// pi(s): the message each state is mapped to.
struct DeterministicMessagePolicy {
  std::vector<Message> assignment;
  int num_messages = 0;

  int num_states() const { return static_cast<int>(assignment.size()); }
};

// pi(s) = argmax_m q(s, m), lowest index on ties.
DeterministicMessagePolicy GreedyMessagePolicy(const Table& q);

// Probability mass routed to each message: D(m) = sum_s 1{pi(s)=m} p(s).
std::vector<double> MessageMass(const DeterministicMessagePolicy& policy,
                                std::span<const double> prior);

// Scaled posterior of the tabular sender:
//   score(s, m) = 1                      if D(m) == 0   (unused message)
//               = 1{m = pi(s)} / D(m)    otherwise.
// Not row-normalized; p(s) is left out of the numerator.
Table ScaledPosterior(const DeterministicMessagePolicy& policy,
                      std::span<const double> prior);

// Row s of ScaledPosterior, given precomputed message mass.
void ScaledPosteriorRow(const DeterministicMessagePolicy& policy,
                        std::span<const double> mass, State s,
                        std::span<double> out);

// Row s in posterior units: p(s|m) = 1{m = pi(s)} p(s) / D(m), and 1 for
// unused messages. Same ordering as the scaled row among used messages; the
// unused-message value of 1 is then the largest a posterior can take.
// Column m of ScaledPosterior: scores of every state for one message.
void ScaledPosteriorColumn(const DeterministicMessagePolicy& policy,
                           std::span<const double> mass, Message m,
                           std::span<double> out);

void PosteriorRow(const DeterministicMessagePolicy& policy,
                  std::span<const double> prior, std::span<const double> mass,
                  State s, std::span<double> out);

// Column m in posterior units, over states. All ones for an unused message.
void PosteriorColumn(const DeterministicMessagePolicy& policy,
                     std::span<const double> prior,
                     std::span<const double> mass, Message m,
                     std::span<double> out);

// Index attaining the maximum, ties broken uniformly with `rng`. The generator
// is only advanced when there is a tie.
int ArgmaxRandomTie(std::span<const double> values, Rng& rng);

inline Message SelectMessage(std::span<const double> scores, Rng& rng) {
  return ArgmaxRandomTie(scores, rng);
}

enum class AccumulationMode {
  // Only the chosen message's accumulator receives p(m|s)/T.
  kPseudocodeLiteral,
  // Every message receives p(m'|s)/T, so each rollout's mean sums to 1.
  kFullSweep,
};

// Moving-average estimate p_hat(m) of the message marginal, built from
// per-rollout means p_bar(m).
class MarginalEstimate {
 public:
  static constexpr double kFloor = 1e-9;

  MarginalEstimate(int num_messages, double weight,
                   AccumulationMode mode = AccumulationMode::kPseudocodeLiteral);

  // Adds one step of the open rollout. `row` is p(.|s; theta).
  void Accumulate(Message chosen, std::span<const double> row,
                  int rollout_length);

  // p_hat <- mu p_hat + (1 - mu) p_bar, floored at kFloor; p_bar reset.
  void Finalize();

  std::span<const double> estimate() const { return estimate_; }
  std::span<const double> rollout_mean() const { return rollout_mean_; }
  double weight() const { return weight_; }
  AccumulationMode mode() const { return mode_; }
  int num_messages() const { return static_cast<int>(estimate_.size()); }

 private:
  std::vector<double> estimate_;
  std::vector<double> rollout_mean_;
  double weight_;
  AccumulationMode mode_;
};

// p(m|s; theta) / p_hat(m), elementwise.
void ScaledScoreRow(std::span<const double> row, const MarginalEstimate& marginal,
                    std::span<double> out);

// rho = p(m|s; theta) / 1: the behavior policy puts all mass on the sent
// message.
inline double ImportanceWeight(std::span<const double> row, Message chosen) {
  return row[chosen];
}

}  // namespace sigbench

#endif  // SIGBENCH_INFERENCE_H_
