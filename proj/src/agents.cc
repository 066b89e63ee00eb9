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

#include "sigbench/agents.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sigbench {
namespace {

// --- Adapters from context learners to senders and receivers ----------------

class QSender : public Sender {
 public:
  QSender(QLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Message Act(State s) override { return learner_.Act(s, episode_, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.state, e.message, e.reward);
    ++episode_;
  }
  Message GreedyMessage(State s) const override { return learner_.Greedy(s); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  QLearner learner_;
  std::int64_t episode_ = 0;
  Rng rng_;
};

class QReceiver : public Receiver {
 public:
  QReceiver(QLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Action Act(Message m) override { return learner_.Act(m, episode_, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.message, e.action, e.reward);
    ++episode_;
  }
  Action GreedyAction(Message m) const override { return learner_.Greedy(m); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  QLearner learner_;
  std::int64_t episode_ = 0;
  Rng rng_;
};

class IterativeSender : public Sender {
 public:
  IterativeSender(IterativeQLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Message Act(State s) override { return learner_.Act(s, episode_, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.state, e.message, e.reward, episode_);
    ++episode_;
  }
  Message GreedyMessage(State s) const override { return learner_.Greedy(s); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  IterativeQLearner learner_;
  std::int64_t episode_ = 0;
  Rng rng_;
};

class IterativeReceiver : public Receiver {
 public:
  IterativeReceiver(IterativeQLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Action Act(Message m) override { return learner_.Act(m, episode_, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.message, e.action, e.reward, episode_);
    ++episode_;
  }
  Action GreedyAction(Message m) const override { return learner_.Greedy(m); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  IterativeQLearner learner_;
  std::int64_t episode_ = 0;
  Rng rng_;
};

class LenientSender : public Sender {
 public:
  LenientSender(LenientLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Message Act(State s) override { return learner_.Act(s, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.state, e.message, e.reward, rng_);
  }
  Message GreedyMessage(State s) const override { return learner_.Greedy(s); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  LenientLearner learner_;
  Rng rng_;
};

class LenientReceiver : public Receiver {
 public:
  LenientReceiver(LenientLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Action Act(Message m) override { return learner_.Act(m, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.message, e.action, e.reward, rng_);
  }
  Action GreedyAction(Message m) const override { return learner_.Greedy(m); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  LenientLearner learner_;
  Rng rng_;
};

class PolicyGradientReceiver : public Receiver {
 public:
  PolicyGradientReceiver(PolicyGradientLearner learner, std::uint64_t seed)
      : learner_(std::move(learner)), rng_(seed) {}
  Action Act(Message m) override { return learner_.Act(m, rng_); }
  void Learn(const Episode& e) override {
    learner_.Learn(e.message, e.action, e.reward);
  }
  Action GreedyAction(Message m) const override { return learner_.Greedy(m); }
  std::vector<double> Snapshot() const override { return learner_.Snapshot(); }

 private:
  PolicyGradientLearner learner_;
  Rng rng_;
};

// Identity message map s -> s.
class FixedSender : public Sender {
 public:
  Message Act(State s) override { return s; }
  void Learn(const Episode&) override {}
  Message GreedyMessage(State s) const override { return s; }
  std::vector<double> Snapshot() const override { return {}; }
};

// Best action for the state whose index equals the message.
class FixedReceiver : public Receiver {
 public:
  explicit FixedReceiver(const SignalingGame& game) {
    for (State s = 0; s < game.num_states(); ++s) {
      best_.push_back(ArgmaxLowest(game.payoff().values().row(s)));
    }
  }
  Action Act(Message m) override { return best_[m]; }
  void Learn(const Episode&) override {}
  Action GreedyAction(Message m) const override { return best_[m]; }
  std::vector<double> Snapshot() const override { return {}; }

 private:
  std::vector<Action> best_;
};

}  // namespace

// --- InfoSender --------------------------------------------------------------

InfoSender::InfoSender(const SignalingGame& game, double alpha, double init,
                       InfoScoring scoring, std::uint64_t seed)
    : q_(game.num_states(), game.num_messages(), init),
      prior_(game.num_states()),
      policy_(GreedyMessagePolicy(q_)),
      alpha_(alpha),
      scoring_(scoring),
      rng_(seed),
      prob_buf_(game.num_states()),
      mass_buf_(game.num_messages()),
      score_buf_(game.num_messages()) {}

void InfoSender::Scores(const EmpiricalPrior& prior, State s,
                        std::span<double> out) const {
  prior.Probabilities(prob_buf_);
  std::fill(mass_buf_.begin(), mass_buf_.end(), 0.0);
  for (State x = 0; x < policy_.num_states(); ++x) {
    mass_buf_[policy_.assignment[x]] += prob_buf_[x];
  }
  if (scoring_ == InfoScoring::kScaled) {
    ScaledPosteriorRow(policy_, mass_buf_, s, out);
  } else {
    PosteriorRow(policy_, prob_buf_, mass_buf_, s, out);
  }
}

Message InfoSender::Act(State s) {
  prior_.Observe(s);
  Scores(prior_, s, score_buf_);
  return SelectMessage(score_buf_, rng_);
}

void InfoSender::Learn(const Episode& e) {
  double& q = q_(e.state, e.message);
  q = QUpdate(q, e.reward, alpha_);
  if (!std::isfinite(q)) throw NonFiniteError("non-finite value in sender Q-table");
  policy_.assignment[e.state] = ArgmaxLowest(q_.row(e.state));
}

Message InfoSender::GreedyMessage(State s) const {
  EmpiricalPrior prior = prior_;
  prior.Observe(s);
  std::vector<double> scores(policy_.num_messages);
  Scores(prior, s, scores);
  return ArgmaxLowest(scores);
}

std::vector<double> InfoSender::Snapshot() const {
  std::vector<double> out = q_.data();
  for (State s = 0; s < prior_.num_states(); ++s) {
    out.push_back(static_cast<double>(prior_.count(s)));
  }
  return out;
}

// --- ApproxInfoSender --------------------------------------------------------

ApproxInfoSender::ApproxInfoSender(const SignalingGame& game, double policy_step,
                                   double value_step, double mu, int rollout,
                                   double gamma, AccumulationMode mode,
                                   std::uint64_t seed)
    : policy_(game.num_states(), game.num_messages()),
      baseline_(game.num_states(), 0.0),
      marginal_(game.num_messages(), mu, mode),
      policy_step_(policy_step),
      value_step_(value_step),
      rollout_(rollout),
      gamma_(gamma),
      rng_(seed),
      score_buf_(game.num_messages()) {
  if (rollout < 1) throw std::invalid_argument("rollout length must be >= 1");
  steps_.reserve(rollout);
}

Message ApproxInfoSender::Act(State s) {
  const auto probs = policy_.probs(s);
  ScaledScoreRow(probs, marginal_, score_buf_);
  const Message m = ArgmaxRandomTie(score_buf_, rng_);
  marginal_.Accumulate(m, probs, rollout_);
  steps_.push_back({s, m, 0.0});
  return m;
}

void ApproxInfoSender::Learn(const Episode& e) {
  steps_.back().reward = e.reward;
  if (static_cast<int>(steps_.size()) == rollout_) {
    marginal_.Finalize();
    ApplyRollout();
    steps_.clear();
  }
}

void ApproxInfoSender::ApplyRollout() {
  // Every episode terminates after one step, so the bootstrap value is 0.
  constexpr double kNextValue = 0.0;
  std::vector<double> grad(policy_.choices());
  for (const Step& step : steps_) {
    const auto probs = policy_.probs(step.state);
    const double rho = ImportanceWeight(probs, step.message);
    LogSoftmaxGradient(probs, step.message, grad);
    const double target = step.reward + gamma_ * kNextValue;
    const double advantage = target - baseline_[step.state];
    for (double& g : grad) g *= policy_step_ * rho * advantage;
    policy_.AddToRow(step.state, grad);
    baseline_[step.state] += value_step_ * (target - baseline_[step.state]);
    if (!std::isfinite(baseline_[step.state])) {
      throw NonFiniteError("non-finite value in sender baseline");
    }
  }
}

Message ApproxInfoSender::GreedyMessage(State s) const {
  ScaledScoreRow(policy_.probs(s), marginal_, score_buf_);
  return ArgmaxLowest(score_buf_);
}

std::vector<double> ApproxInfoSender::Snapshot() const {
  std::vector<double> out = policy_.params().data();
  out.insert(out.end(), baseline_.begin(), baseline_.end());
  const auto est = marginal_.estimate();
  out.insert(out.end(), est.begin(), est.end());
  return out;
}

// --- ModelSReceiver ----------------------------------------------------------

ModelSReceiver::ModelSReceiver(const SignalingGame& game, double alpha,
                               double init, LinearEpsilonSchedule schedule,
                               bool hindsight, std::uint64_t seed)
    : sender_model_(game.num_states(), game.num_messages(), init),
      q_(game.num_states(), game.num_actions(), init),
      prior_(game.num_states()),
      model_policy_(GreedyMessagePolicy(sender_model_)),
      alpha_(alpha),
      schedule_(schedule),
      hindsight_(hindsight),
      rng_(seed),
      prob_buf_(game.num_states()),
      mass_buf_(game.num_messages()),
      col_buf_(game.num_states()) {}

void ModelSReceiver::StatePosterior(Message m, std::span<double> out) const {
  if (prior_.total() == 0) {
    std::fill(prob_buf_.begin(), prob_buf_.end(), 1.0 / prob_buf_.size());
  } else {
    prior_.Probabilities(prob_buf_);
  }
  std::fill(mass_buf_.begin(), mass_buf_.end(), 0.0);
  for (State s = 0; s < model_policy_.num_states(); ++s) {
    mass_buf_[model_policy_.assignment[s]] += prob_buf_[s];
  }
  ScaledPosteriorColumn(model_policy_, mass_buf_, m, out);
}

Action ModelSReceiver::Act(Message m) {
  StatePosterior(m, col_buf_);
  last_inferred_ = ArgmaxRandomTie(col_buf_, rng_);
  return EpsilonGreedy(q_.row(last_inferred_), schedule_.At(episode_), rng_);
}

void ModelSReceiver::Learn(const Episode& e) {
  const State s = hindsight_ ? e.state : last_inferred_;
  prior_.Observe(s);
  double& model = sender_model_(s, e.message);
  model = QUpdate(model, e.reward, alpha_);
  double& q = q_(s, e.action);
  q = QUpdate(q, e.reward, alpha_);
  if (!std::isfinite(model) || !std::isfinite(q)) {
    throw NonFiniteError("non-finite value in ModelS tables");
  }
  model_policy_.assignment[s] = ArgmaxLowest(sender_model_.row(s));
  ++episode_;
}

Action ModelSReceiver::GreedyAction(Message m) const {
  std::vector<double> column(q_.rows());
  StatePosterior(m, column);
  return ArgmaxLowest(q_.row(ArgmaxLowest(column)));
}

std::vector<double> ModelSReceiver::Snapshot() const {
  std::vector<double> out = sender_model_.data();
  out.insert(out.end(), q_.data().begin(), q_.data().end());
  return out;
}

// --- ModelRSender ------------------------------------------------------------

ModelRSender::ModelRSender(const SignalingGame& game, double alpha, double init,
                           LinearEpsilonSchedule schedule, std::uint64_t seed)
    : receiver_model_(game.num_messages(), game.num_actions(), init),
      q_(game.num_states(), game.num_actions(), init),
      predicted_(game.num_messages(), 0),
      alpha_(alpha),
      schedule_(schedule),
      rng_(seed),
      score_buf_(game.num_messages()) {}

void ModelRSender::MessageScores(State s, std::span<double> out) const {
  for (Message m = 0; m < static_cast<int>(predicted_.size()); ++m) {
    out[m] = q_(s, predicted_[m]);
  }
}

Message ModelRSender::Act(State s) {
  MessageScores(s, score_buf_);
  return EpsilonGreedy(score_buf_, schedule_.At(episode_), rng_);
}

void ModelRSender::Learn(const Episode& e) {
  double& model = receiver_model_(e.message, e.action);
  model = QUpdate(model, e.reward, alpha_);
  double& q = q_(e.state, e.action);
  q = QUpdate(q, e.reward, alpha_);
  if (!std::isfinite(model) || !std::isfinite(q)) {
    throw NonFiniteError("non-finite value in ModelR tables");
  }
  predicted_[e.message] = ArgmaxLowest(receiver_model_.row(e.message));
  ++episode_;
}

Message ModelRSender::GreedyMessage(State s) const {
  MessageScores(s, score_buf_);
  return ArgmaxLowest(score_buf_);
}

std::vector<double> ModelRSender::Snapshot() const {
  std::vector<double> out = receiver_model_.data();
  out.insert(out.end(), q_.data().begin(), q_.data().end());
  return out;
}

// --- SignalingBiasSender -----------------------------------------------------

SignalingBiasSender::SignalingBiasSender(const SignalingGame& game,
                                         double policy_step, double value_step,
                                         double signaling_weight, double lambda,
                                         double entropy_target,
                                         bool empirical_prior, std::uint64_t seed)
    : learner_(game.num_states(), game.num_messages(), policy_step, value_step),
      prior_(game.num_states()),
      signaling_weight_(signaling_weight),
      lambda_(lambda),
      entropy_target_(entropy_target),
      empirical_prior_(empirical_prior),
      rng_(seed) {}

std::vector<double> SignalingBiasSender::StateWeights() const {
  const int n = prior_.num_states();
  if (!empirical_prior_ || prior_.total() == 0) {
    return std::vector<double>(n, 1.0 / n);
  }
  return prior_.Probabilities();
}

Message SignalingBiasSender::Act(State s) { return learner_.Act(s, rng_); }

void SignalingBiasSender::Learn(const Episode& e) {
  prior_.Observe(e.state);
  SoftmaxTable& policy = learner_.policy();
  const int states = policy.contexts();
  const int messages = policy.choices();
  // Both gradients are taken at the pre-update parameters.
  Table probs(states, messages);
  for (State s = 0; s < states; ++s) {
    const auto row = policy.probs(s);
    std::copy(row.begin(), row.end(), probs.row(s).begin());
  }
  Table grad;
  SignalingGradient(probs, StateWeights(), lambda_, entropy_target_, &grad);
  learner_.Learn(e.state, e.message, e.reward);
  const double scale = learner_.policy_step() * signaling_weight_;
  std::vector<double> delta(messages);
  for (State s = 0; s < states; ++s) {
    for (Message m = 0; m < messages; ++m) delta[m] = scale * grad(s, m);
    policy.AddToRow(s, delta);
  }
}

Message SignalingBiasSender::GreedyMessage(State s) const {
  return learner_.Greedy(s);
}

std::vector<double> SignalingBiasSender::Snapshot() const {
  return learner_.Snapshot();
}

// --- Factory -----------------------------------------------------------------

AgentPair MakeAgents(const AgentSpec& spec, const SignalingGame& game,
                     std::uint64_t run_seed, FixedAgent fixed) {
  spec.Validate();
  const std::uint64_t sender_seed = SubstreamSeed(run_seed, Stream::kSender);
  const std::uint64_t receiver_seed = SubstreamSeed(run_seed, Stream::kReceiver);
  const int S = game.num_states();
  const int M = game.num_messages();
  const int A = game.num_actions();
  const LinearEpsilonSchedule schedule{spec.epsilon, spec.epsilon_decay};
  const LinearEpsilonSchedule greedy{0.0, 0.0};

  AgentPair pair;
  switch (spec.algorithm) {
    case Algorithm::kInfoQ:
      pair.sender = std::make_unique<InfoSender>(
          game, spec.sender_alpha, spec.sender_init, spec.info_scoring(), sender_seed);
      pair.receiver = std::make_unique<QReceiver>(
          QLearner(M, A, spec.receiver_init, spec.receiver_alpha,
                   spec.receiver_alpha, greedy),
          receiver_seed);
      break;
    case Algorithm::kInfoPolicy:
      pair.sender = std::make_unique<InfoSender>(
          game, spec.sender_alpha, spec.sender_init, spec.info_scoring(), sender_seed);
      pair.receiver = std::make_unique<PolicyGradientReceiver>(
          PolicyGradientLearner(M, A, spec.policy_step, spec.value_step),
          receiver_seed);
      break;
    case Algorithm::kApproxInfo:
      pair.sender = std::make_unique<ApproxInfoSender>(
          game, spec.policy_step, spec.value_step, spec.mu,
          static_cast<int>(spec.rollout), spec.gamma, spec.accumulation(),
          sender_seed);
      pair.receiver = std::make_unique<QReceiver>(
          QLearner(M, A, spec.receiver_init, spec.receiver_alpha,
                   spec.receiver_alpha, greedy),
          receiver_seed);
      break;
    case Algorithm::kIql:
      pair.sender = std::make_unique<QSender>(
          QLearner(S, M, spec.q_init, spec.alpha, spec.alpha, schedule), sender_seed);
      pair.receiver = std::make_unique<QReceiver>(
          QLearner(M, A, spec.q_init, spec.alpha, spec.alpha, schedule), receiver_seed);
      break;
    case Algorithm::kHysteretic:
      pair.sender = std::make_unique<QSender>(
          QLearner(S, M, spec.q_init, spec.alpha, spec.beta, schedule), sender_seed);
      pair.receiver = std::make_unique<QReceiver>(
          QLearner(M, A, spec.q_init, spec.alpha, spec.beta, schedule), receiver_seed);
      break;
    case Algorithm::kIq: {
      const int period = static_cast<int>(spec.period);
      pair.sender = std::make_unique<IterativeSender>(
          IterativeQLearner(S, M, spec.q_init, spec.alpha, schedule, period, true),
          sender_seed);
      pair.receiver = std::make_unique<IterativeReceiver>(
          IterativeQLearner(M, A, spec.q_init, spec.alpha, schedule, period, false),
          receiver_seed);
      break;
    }
    case Algorithm::kModelS:
      pair.sender = std::make_unique<QSender>(
          QLearner(S, M, spec.q_init, spec.alpha, spec.alpha, schedule), sender_seed);
      pair.receiver = std::make_unique<ModelSReceiver>(
          game, spec.alpha, spec.q_init, schedule, spec.hindsight != 0, receiver_seed);
      break;
    case Algorithm::kModelR:
      pair.sender = std::make_unique<ModelRSender>(game, spec.alpha, spec.q_init,
                                                   schedule, sender_seed);
      pair.receiver = std::make_unique<QReceiver>(
          QLearner(M, A, spec.q_init, spec.alpha, spec.alpha, schedule), receiver_seed);
      break;
    case Algorithm::kLenience: {
      const LenienceParams params{spec.alpha,      spec.max_temp, spec.min_temp,
                                  spec.temp_decay, spec.omega,    spec.theta};
      pair.sender = std::make_unique<LenientSender>(
          LenientLearner(S, M, spec.q_init, params), sender_seed);
      pair.receiver = std::make_unique<LenientReceiver>(
          LenientLearner(M, A, spec.q_init, params), receiver_seed);
      break;
    }
    case Algorithm::kCommBias:
      pair.sender = std::make_unique<SignalingBiasSender>(
          game, spec.policy_step, spec.value_step, spec.signaling_weight,
          spec.lambda, spec.entropy_target, spec.empirical_prior != 0, sender_seed);
      pair.receiver = std::make_unique<PolicyGradientReceiver>(
          PolicyGradientLearner(M, A, spec.policy_step, spec.value_step),
          receiver_seed);
      break;
  }

  if (fixed != FixedAgent::kNone && M != S) {
    throw std::invalid_argument("fixed-agent mode needs as many messages as states");
  }
  if (fixed == FixedAgent::kSender) pair.sender = std::make_unique<FixedSender>();
  if (fixed == FixedAgent::kReceiver) {
    pair.receiver = std::make_unique<FixedReceiver>(game);
  }
  return pair;
}

}  // namespace sigbench
