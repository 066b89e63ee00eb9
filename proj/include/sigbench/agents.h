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

#ifndef SIGBENCH_AGENTS_H_
#define SIGBENCH_AGENTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "sigbench/agent_spec.h"
#include "sigbench/game.h"
#include "sigbench/inference.h"
#include "sigbench/learners.h"

namespace sigbench {

// Everything both agents see once an episode ends. Receivers must not read
// `state` unless they are explicitly granted hindsight.
struct Episode {
  State state;
  Message message;
  Action action;
  double reward;
};

class Sender {
 public:
  virtual ~Sender() = default;
  virtual Message Act(State s) = 0;
  virtual void Learn(const Episode& episode) = 0;
  // Exploration-free choice with lowest-index tie-breaking. Never mutates.
  virtual Message GreedyMessage(State s) const = 0;
  // All learned state, flattened. Used to check determinism and purity.
  virtual std::vector<double> Snapshot() const = 0;
};

class Receiver {
 public:
  virtual ~Receiver() = default;
  virtual Action Act(Message m) = 0;
  virtual void Learn(const Episode& episode) = 0;
  virtual Action GreedyAction(Message m) const = 0;
  virtual std::vector<double> Snapshot() const = 0;
};

// Tabular inference sender. Keeps Q(s, m), visit counts N(s) and the greedy
// map pi(s) = argmax_m Q(s, m); sends the message that maximizes the
// posterior of the current state, breaking ties at random.
class InfoSender : public Sender {
 public:
  InfoSender(const SignalingGame& game, double alpha, double init,
             InfoScoring scoring, std::uint64_t seed);

  Message Act(State s) override;
  void Learn(const Episode& episode) override;
  Message GreedyMessage(State s) const override;
  std::vector<double> Snapshot() const override;

  // Scores every message for state `s` under `prior` (which must include s).
  void Scores(const EmpiricalPrior& prior, State s, std::span<double> out) const;

  const Table& q() const { return q_; }
  const EmpiricalPrior& prior() const { return prior_; }
  const DeterministicMessagePolicy& policy() const { return policy_; }

 private:
  Table q_;
  EmpiricalPrior prior_;
  DeterministicMessagePolicy policy_;
  double alpha_;
  InfoScoring scoring_;
  Rng rng_;
  mutable std::vector<double> prob_buf_;
  mutable std::vector<double> mass_buf_;
  std::vector<double> score_buf_;
};

// Softmax sender acting on p(m|s; theta) / p_hat(m) with a moving-average
// marginal, trained once per rollout with the importance-weighted gradient
// grad p(m|s; theta) (r + gamma v' - b(s)), where v' = 0 for one-step episodes.
class ApproxInfoSender : public Sender {
 public:
  ApproxInfoSender(const SignalingGame& game, double policy_step,
                   double value_step, double mu, int rollout, double gamma,
                   AccumulationMode mode, std::uint64_t seed);

  Message Act(State s) override;
  void Learn(const Episode& episode) override;
  Message GreedyMessage(State s) const override;
  std::vector<double> Snapshot() const override;

  const SoftmaxTable& policy() const { return policy_; }
  const MarginalEstimate& marginal() const { return marginal_; }
  const std::vector<double>& baseline() const { return baseline_; }

 private:
  struct Step {
    State state;
    Message message;
    double reward;
  };

  void ApplyRollout();

  SoftmaxTable policy_;
  std::vector<double> baseline_;
  MarginalEstimate marginal_;
  double policy_step_;
  double value_step_;
  int rollout_;
  double gamma_;
  std::vector<Step> steps_;
  Rng rng_;
  mutable std::vector<double> score_buf_;
};

// Receiver that models the sender with Q_hat(s, m), infers the most probable
// state of a message, and learns Q(s, a) for the inferred (or, with
// hindsight, the true) state.
class ModelSReceiver : public Receiver {
 public:
  ModelSReceiver(const SignalingGame& game, double alpha, double init,
                 LinearEpsilonSchedule schedule, bool hindsight,
                 std::uint64_t seed);

  Action Act(Message m) override;
  void Learn(const Episode& episode) override;
  Action GreedyAction(Message m) const override;
  std::vector<double> Snapshot() const override;

  // Scaled posterior score of every state for message m, from the modeled
  // sender and the receiver's own state counts (uniform before any update).
  void StatePosterior(Message m, std::span<double> out) const;

  const Table& sender_model() const { return sender_model_; }
  const Table& q() const { return q_; }

 private:
  Table sender_model_;
  Table q_;
  EmpiricalPrior prior_;
  DeterministicMessagePolicy model_policy_;
  double alpha_;
  LinearEpsilonSchedule schedule_;
  bool hindsight_;
  std::int64_t episode_ = 0;
  State last_inferred_ = 0;
  Rng rng_;
  mutable std::vector<double> prob_buf_;
  mutable std::vector<double> mass_buf_;
  mutable std::vector<double> col_buf_;
};

// Sender that models the receiver with Q_hat(m, a), predicts its greedy
// action per message, and picks the message whose predicted action has the
// highest Q(s, a). Needs the receiver's realized action.
class ModelRSender : public Sender {
 public:
  ModelRSender(const SignalingGame& game, double alpha, double init,
               LinearEpsilonSchedule schedule, std::uint64_t seed);

  Message Act(State s) override;
  void Learn(const Episode& episode) override;
  Message GreedyMessage(State s) const override;
  std::vector<double> Snapshot() const override;

  void MessageScores(State s, std::span<double> out) const;

  const Table& receiver_model() const { return receiver_model_; }
  const Table& q() const { return q_; }

 private:
  Table receiver_model_;
  Table q_;
  std::vector<Action> predicted_;
  double alpha_;
  LinearEpsilonSchedule schedule_;
  std::int64_t episode_ = 0;
  Rng rng_;
  mutable std::vector<double> score_buf_;
};

// REINFORCE sender with the exact tabular positive-signaling bias.
class SignalingBiasSender : public Sender {
 public:
  SignalingBiasSender(const SignalingGame& game, double policy_step,
                      double value_step, double signaling_weight, double lambda,
                      double entropy_target, bool empirical_prior,
                      std::uint64_t seed);

  Message Act(State s) override;
  void Learn(const Episode& episode) override;
  Message GreedyMessage(State s) const override;
  std::vector<double> Snapshot() const override;

  const PolicyGradientLearner& learner() const { return learner_; }
  std::vector<double> StateWeights() const;

 private:
  PolicyGradientLearner learner_;
  EmpiricalPrior prior_;
  double signaling_weight_;
  double lambda_;
  double entropy_target_;
  bool empirical_prior_;
  Rng rng_;
};

enum class FixedAgent { kNone, kSender, kReceiver };

struct AgentPair {
  std::unique_ptr<Sender> sender;
  std::unique_ptr<Receiver> receiver;
};

// Builds the sender/receiver pair for `spec`. Each agent gets its own
// generator derived from `run_seed`. With `fixed`, one side is replaced by an
// optimal fixed policy (requires as many messages as states).
AgentPair MakeAgents(const AgentSpec& spec, const SignalingGame& game,
                     std::uint64_t run_seed, FixedAgent fixed = FixedAgent::kNone);

}  // namespace sigbench

#endif  // SIGBENCH_AGENTS_H_
