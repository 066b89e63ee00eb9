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

#include "sigbench/learners.h"

#include <cmath>
#include <numeric>

namespace sigbench {
namespace {

void CheckFinite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NonFiniteError(std::string("non-finite value in ") + what);
  }
}

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

// ln v, or 0 when v == 0 so that 0 ln 0 terms vanish.
double SafeLog(double v) { return v > 0.0 ? std::log(v) : 0.0; }

}  // namespace

double LenientApplyProbability(double temperature, double theta) {
  if (temperature <= 0.0) return 1.0;
  return 1.0 - std::exp(-1.0 / (theta * temperature));
}

int EpsilonGreedy(std::span<const double> values, double epsilon, Rng& rng) {
  if (Uniform01(rng) < epsilon) {
    return UniformIndex(rng, static_cast<int>(values.size()));
  }
  return ArgmaxLowest(values);
}

void Softmax(std::span<const double> logits, std::span<double> out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

int SampleIndex(std::span<const double> probs, Rng& rng) {
  const double u = Uniform01(rng);
  double cumulative = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  // Rounding left the total a hair below u: take the last positive entry.
  for (int i = n - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return i;
  }
  return n - 1;
}

void LogSoftmaxGradient(std::span<const double> probs, int taken,
                        std::span<double> out) {
  for (std::size_t k = 0; k < probs.size(); ++k) {
    out[k] = (static_cast<int>(k) == taken ? 1.0 : 0.0) - probs[k];
  }
}

void ProbabilityGradient(std::span<const double> probs, int taken,
                         std::span<double> out) {
  const double p = probs[taken];
  for (std::size_t k = 0; k < probs.size(); ++k) {
    out[k] = p * ((static_cast<int>(k) == taken ? 1.0 : 0.0) - probs[k]);
  }
}

SoftmaxTable::SoftmaxTable(int contexts, int choices)
    : params_(contexts, choices, 0.0), probs_(contexts, choices, 1.0 / choices) {}

void SoftmaxTable::AddToRow(int context, std::span<const double> delta) {
  auto row = params_.row(context);
  for (std::size_t k = 0; k < row.size(); ++k) {
    row[k] += delta[k];
    CheckFinite(row[k], "softmax parameters");
  }
  Softmax(row, probs_.row(context));
}

void SoftmaxTable::SetParams(const Table& params) {
  if (params.rows() != params_.rows() || params.cols() != params_.cols()) {
    throw std::invalid_argument("softmax parameter shape mismatch");
  }
  params_ = params;
  for (int x = 0; x < params_.rows(); ++x) Softmax(params_.row(x), probs_.row(x));
}

Table SoftmaxProbabilities(const Table& logits) {
  Table probs(logits.rows(), logits.cols());
  for (int x = 0; x < logits.rows(); ++x) Softmax(logits.row(x), probs.row(x));
  return probs;
}

void ReinforceUpdate(SoftmaxTable& policy, std::vector<double>& baseline,
                     int context, int taken, double reward, double policy_step,
                     double value_step) {
  const double advantage = reward - baseline[context];
  std::vector<double> grad(policy.choices());
  LogSoftmaxGradient(policy.probs(context), taken, grad);
  for (double& g : grad) {
    g *= policy_step * advantage;
    CheckFinite(g, "policy gradient");
  }
  policy.AddToRow(context, grad);
  baseline[context] += value_step * (reward - baseline[context]);
  CheckFinite(baseline[context], "value baseline");
}

SignalingTerms SignalingObjective(const Table& message_probs,
                                  std::span<const double> state_weights,
                                  double lambda, double entropy_target) {
  const int states = message_probs.rows();
  const int messages = message_probs.cols();
  std::vector<double> marginal(messages, 0.0);
  SignalingTerms terms;
  double penalty = 0.0;
  for (int s = 0; s < states; ++s) {
    const auto row = message_probs.row(s);
    for (int m = 0; m < messages; ++m) marginal[m] += state_weights[s] * row[m];
    const double h = Entropy(row);
    terms.conditional_entropy += state_weights[s] * h;
    penalty += state_weights[s] * (h - entropy_target) * (h - entropy_target);
  }
  terms.marginal_entropy = Entropy(marginal);
  terms.objective = lambda * terms.marginal_entropy - penalty;
  return terms;
}

void SignalingGradient(const Table& message_probs,
                       std::span<const double> state_weights, double lambda,
                       double entropy_target, Table* grad) {
  const int states = message_probs.rows();
  const int messages = message_probs.cols();
  *grad = Table(states, messages, 0.0);
  std::vector<double> log_marginal(messages, 0.0);
  {
    std::vector<double> marginal(messages, 0.0);
    for (int s = 0; s < states; ++s) {
      for (int m = 0; m < messages; ++m) {
        marginal[m] += state_weights[s] * message_probs(s, m);
      }
    }
    for (int m = 0; m < messages; ++m) log_marginal[m] = SafeLog(marginal[m]);
  }
  for (int s = 0; s < states; ++s) {
    const auto pi = message_probs.row(s);
    const double w = state_weights[s];
    double mean_log_marginal = 0.0;
    double h = 0.0;
    for (int m = 0; m < messages; ++m) {
      mean_log_marginal += pi[m] * log_marginal[m];
      if (pi[m] > 0.0) h -= pi[m] * std::log(pi[m]);
    }
    for (int k = 0; k < messages; ++k) {
      // d H(p(m)) / d theta_sk = w pi_k (sum_m pi_m ln p(m) - ln p(k))
      const double d_marginal = w * pi[k] * (mean_log_marginal - log_marginal[k]);
      // d H_s / d theta_sk = -pi_k (ln pi_k + H_s)
      const double d_cond = -pi[k] * (SafeLog(pi[k]) + h);
      const double g = lambda * d_marginal - 2.0 * w * (h - entropy_target) * d_cond;
      CheckFinite(g, "signaling gradient");
      (*grad)(s, k) = g;
    }
  }
}

QLearner::QLearner(int contexts, int choices, double init, double alpha,
                   double negative_step, LinearEpsilonSchedule schedule)
    : q_(contexts, choices, init),
      alpha_(alpha),
      negative_step_(negative_step),
      schedule_(schedule) {}

int QLearner::Act(int context, std::int64_t episode, Rng& rng) const {
  return EpsilonGreedy(q_.row(context), schedule_.At(episode), rng);
}

void QLearner::Learn(int context, int choice, double reward) {
  double& q = q_(context, choice);
  q = HystereticUpdate(q, reward, alpha_, negative_step_);
  CheckFinite(q, "Q-table");
}

IterativeQLearner::IterativeQLearner(int contexts, int choices, double init,
                                     double alpha, LinearEpsilonSchedule schedule,
                                     int period, bool even_periods)
    : q_(contexts, choices, init),
      alpha_(alpha),
      schedule_(schedule),
      period_(period),
      even_periods_(even_periods) {}

bool IterativeQLearner::IsLearning(std::int64_t episode) const {
  const bool even = (episode / period_) % 2 == 0;
  return even == even_periods_;
}

double IterativeQLearner::EpsilonAt(std::int64_t episode) const {
  if (!IsLearning(episode)) return 0.0;
  return schedule_.At(episode % period_);
}

int IterativeQLearner::Act(int context, std::int64_t episode, Rng& rng) const {
  if (!IsLearning(episode)) return Greedy(context);
  return EpsilonGreedy(q_.row(context), EpsilonAt(episode), rng);
}

void IterativeQLearner::Learn(int context, int choice, double reward,
                              std::int64_t episode) {
  if (!IsLearning(episode)) return;
  double& q = q_(context, choice);
  q = QUpdate(q, reward, alpha_);
  CheckFinite(q, "Q-table");
}

LenientLearner::LenientLearner(int contexts, int choices, double init,
                               LenienceParams params)
    : q_(contexts, choices, init),
      temps_(contexts, choices, params.max_temp),
      params_(params),
      scratch_(choices) {}

double LenientLearner::SelectionTemperature(int context) const {
  const auto row = temps_.row(context);
  const double mean = std::accumulate(row.begin(), row.end(), 0.0) / row.size();
  return std::clamp(params_.omega * mean, params_.min_temp, params_.max_temp);
}

int LenientLearner::Act(int context, Rng& rng) const {
  const double tau = SelectionTemperature(context);
  const auto q = q_.row(context);
  if (tau <= 0.0) return ArgmaxLowest(q);
  for (std::size_t k = 0; k < q.size(); ++k) scratch_[k] = q[k] / tau;
  Softmax(scratch_, scratch_);
  return SampleIndex(scratch_, rng);
}

void LenientLearner::Learn(int context, int choice, double reward, Rng& rng) {
  double& q = q_(context, choice);
  double& temp = temps_(context, choice);
  const double delta = reward - q;
  bool apply = delta >= 0.0;
  if (!apply) apply = Uniform01(rng) < LenientApplyProbability(temp, params_.theta);
  if (apply) q += params_.alpha * delta;
  CheckFinite(q, "Q-table");
  temp = std::max(params_.min_temp, params_.temp_decay * temp);
}

std::vector<double> LenientLearner::Snapshot() const {
  std::vector<double> out = q_.data();
  out.insert(out.end(), temps_.data().begin(), temps_.data().end());
  return out;
}

PolicyGradientLearner::PolicyGradientLearner(int contexts, int choices,
                                             double policy_step, double value_step)
    : policy_(contexts, choices),
      baseline_(contexts, 0.0),
      policy_step_(policy_step),
      value_step_(value_step) {}

void PolicyGradientLearner::Learn(int context, int choice, double reward) {
  ReinforceUpdate(policy_, baseline_, context, choice, reward, policy_step_,
                  value_step_);
}

std::vector<double> PolicyGradientLearner::Snapshot() const {
  std::vector<double> out = policy_.params().data();
  out.insert(out.end(), baseline_.begin(), baseline_.end());
  return out;
}

}  // namespace sigbench
