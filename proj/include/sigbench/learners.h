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

#ifndef SIGBENCH_LEARNERS_H_
#define SIGBENCH_LEARNERS_H_

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigbench/rng.h"
#include "sigbench/table.h"

namespace sigbench {

// Raised when a learner produces a NaN or infinite value. The harness marks
// the run as failed and keeps going.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinearEpsilonSchedule {
  double initial = 0.0;
  double decay = 0.0;

  double At(std::int64_t episode) const {
    return std::max(0.0, initial - static_cast<double>(episode) * decay);
  }
};

inline double QUpdate(double q, double reward, double alpha) {
  return q + alpha * (reward - q);
}

// Larger step `alpha` for positive TD errors, `beta` otherwise.
inline double HystereticUpdate(double q, double reward, double alpha, double beta) {
  const double delta = reward - q;
  return q + (delta > 0 ? alpha : beta) * delta;
}

// Probability that lenience applies a negative update at temperature T:
// 1 - exp(-1 / (theta T)). Equals 1 once T reaches 0.
double LenientApplyProbability(double temperature, double theta);

// Epsilon-greedy over `values`: with probability epsilon a uniform choice,
// otherwise the lowest-index maximum. Always consumes one uniform draw.
int EpsilonGreedy(std::span<const double> values, double epsilon, Rng& rng);

// Numerically stable softmax.
void Softmax(std::span<const double> logits, std::span<double> out);

// Samples an index from a probability vector.
int SampleIndex(std::span<const double> probs, Rng& rng);

// d log pi(u) / d theta_k = 1{k=u} - pi_k.
void LogSoftmaxGradient(std::span<const double> probs, int taken,
                        std::span<double> out);

// d pi(u) / d theta_k = pi_u (1{k=u} - pi_k).
void ProbabilityGradient(std::span<const double> probs, int taken,
                         std::span<double> out);

// Per-context softmax policy with cached probabilities.
class SoftmaxTable {
 public:
  SoftmaxTable(int contexts, int choices);

  int contexts() const { return params_.rows(); }
  int choices() const { return params_.cols(); }
  const Table& params() const { return params_; }
  std::span<const double> probs(int context) const { return probs_.row(context); }

  // theta(context, .) += delta; rejects non-finite results.
  void AddToRow(int context, std::span<const double> delta);
  // Replaces all parameters.
  void SetParams(const Table& params);

 private:
  Table params_;
  Table probs_;
};

// REINFORCE with a learned per-context baseline. The advantage uses the
// baseline before its own update.
void ReinforceUpdate(SoftmaxTable& policy, std::vector<double>& baseline,
                     int context, int taken, double reward, double policy_step,
                     double value_step);

// Positive-signaling objective for a tabular sender with state weights p(s):
//   J = lambda H(p(m)) - sum_s p(s) (H(p(.|s)) - H_target)^2,
//   p(m) = sum_s p(s) p(m|s).
struct SignalingTerms {
  double marginal_entropy = 0.0;
  double conditional_entropy = 0.0;  // sum_s p(s) H(p(.|s))
  double objective = 0.0;
};
SignalingTerms SignalingObjective(const Table& message_probs,
                                  std::span<const double> state_weights,
                                  double lambda, double entropy_target);
// dJ/dtheta for softmax rows, written into `grad` (same shape as the table).
void SignalingGradient(const Table& message_probs,
                       std::span<const double> state_weights, double lambda,
                       double entropy_target, Table* grad);

// Probabilities of every row of a softmax table, as one table.
Table SoftmaxProbabilities(const Table& logits);

// --- Context learners -------------------------------------------------------
//
// A context learner picks a choice for a context (state for senders, message
// for receivers) and learns from the immediate reward. Episode indices are
// zero-based counts of completed episodes.

class QLearner {
 public:
  // `negative_step` == `alpha` gives plain Q-learning.
  QLearner(int contexts, int choices, double init, double alpha,
           double negative_step, LinearEpsilonSchedule schedule);

  int Act(int context, std::int64_t episode, Rng& rng) const;
  void Learn(int context, int choice, double reward);
  int Greedy(int context) const { return ArgmaxLowest(q_.row(context)); }

  const Table& q() const { return q_; }
  const LinearEpsilonSchedule& schedule() const { return schedule_; }
  std::vector<double> Snapshot() const { return q_.data(); }

 private:
  Table q_;
  double alpha_;
  double negative_step_;
  LinearEpsilonSchedule schedule_;
};

// Alternating learner: learns during its own periods (epsilon restarting at
// the schedule's initial value each period), acts greedily and never updates
// otherwise. The sender owns even-numbered periods.
class IterativeQLearner {
 public:
  IterativeQLearner(int contexts, int choices, double init, double alpha,
                    LinearEpsilonSchedule schedule, int period, bool even_periods);

  bool IsLearning(std::int64_t episode) const;
  double EpsilonAt(std::int64_t episode) const;
  int Act(int context, std::int64_t episode, Rng& rng) const;
  void Learn(int context, int choice, double reward, std::int64_t episode);
  int Greedy(int context) const { return ArgmaxLowest(q_.row(context)); }

  const Table& q() const { return q_; }
  std::vector<double> Snapshot() const { return q_.data(); }

 private:
  Table q_;
  double alpha_;
  LinearEpsilonSchedule schedule_;
  int period_;
  bool even_periods_;
};

struct LenienceParams {
  double alpha = 0.1;
  double max_temp = 5.0;
  double min_temp = 1.6e-3;
  double temp_decay = 0.99;
  double omega = 0.1;
  double theta = 1.0;
};

// Lenient Q-learning: Boltzmann selection at temperature
// clamp(omega * mean_u T(x, u), min_temp, max_temp); negative updates are
// applied with LenientApplyProbability(T(x, u)); T(x, u) decays per visit.
class LenientLearner {
 public:
  LenientLearner(int contexts, int choices, double init, LenienceParams params);

  double SelectionTemperature(int context) const;
  int Act(int context, Rng& rng) const;
  void Learn(int context, int choice, double reward, Rng& rng);
  int Greedy(int context) const { return ArgmaxLowest(q_.row(context)); }

  const Table& q() const { return q_; }
  const Table& temperatures() const { return temps_; }
  std::vector<double> Snapshot() const;

 private:
  Table q_;
  Table temps_;
  LenienceParams params_;
  mutable std::vector<double> scratch_;
};

// Softmax policy trained by REINFORCE with a value baseline.
class PolicyGradientLearner {
 public:
  PolicyGradientLearner(int contexts, int choices, double policy_step,
                        double value_step);

  int Act(int context, Rng& rng) const { return SampleIndex(policy_.probs(context), rng); }
  void Learn(int context, int choice, double reward);
  int Greedy(int context) const { return ArgmaxLowest(policy_.probs(context)); }

  SoftmaxTable& policy() { return policy_; }
  const SoftmaxTable& policy() const { return policy_; }
  const std::vector<double>& baseline() const { return baseline_; }
  double policy_step() const { return policy_step_; }
  std::vector<double> Snapshot() const;

 private:
  SoftmaxTable policy_;
  std::vector<double> baseline_;
  double policy_step_;
  double value_step_;
};

}  // namespace sigbench

#endif  // SIGBENCH_LEARNERS_H_
