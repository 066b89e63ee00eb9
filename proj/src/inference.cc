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

#include "sigbench/inference.h"

#include <stdexcept>

namespace sigbench {

std::vector<double> EmpiricalPrior::Probabilities() const {
  std::vector<double> p(counts_.size());
  Probabilities(p);
  return p;
}

void EmpiricalPrior::Probabilities(std::span<double> out) const {
  if (total_ <= 0) {
    throw std::logic_error("empirical prior has no observations");
  }
  const double total = static_cast<double>(total_);
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    out[s] = static_cast<double>(counts_[s]) / total;
  }
}

DeterministicMessagePolicy GreedyMessagePolicy(const Table& q) {
  DeterministicMessagePolicy policy;
  policy.num_messages = q.cols();
  policy.assignment.resize(q.rows());
  for (int s = 0; s < q.rows(); ++s) policy.assignment[s] = ArgmaxLowest(q.row(s));
  return policy;
}

std::vector<double> MessageMass(const DeterministicMessagePolicy& policy,
                                std::span<const double> prior) {
  std::vector<double> mass(policy.num_messages, 0.0);
  double total = 0.0;
  for (int s = 0; s < policy.num_states(); ++s) {
    mass[policy.assignment[s]] += prior[s];
    total += prior[s];
  }
  // Dividing by a total summed in the same order makes a message that carries
  // every state land on exactly 1, so it ties with the unused-message fallback.
  if (total > 0.0) {
    for (double& v : mass) v /= total;
  }
  return mass;
}

void ScaledPosteriorRow(const DeterministicMessagePolicy& policy,
                        std::span<const double> mass, State s,
                        std::span<double> out) {
  for (int m = 0; m < policy.num_messages; ++m) {
    if (mass[m] == 0.0) {
      out[m] = 1.0;
    } else {
      out[m] = policy.assignment[s] == m ? 1.0 / mass[m] : 0.0;
    }
  }
}

void ScaledPosteriorColumn(const DeterministicMessagePolicy& policy,
                           std::span<const double> mass, Message m,
                           std::span<double> out) {
  for (int s = 0; s < policy.num_states(); ++s) {
    if (mass[m] == 0.0) {
      out[s] = 1.0;
    } else {
      out[s] = policy.assignment[s] == m ? 1.0 / mass[m] : 0.0;
    }
  }
}

Table ScaledPosterior(const DeterministicMessagePolicy& policy,
                      std::span<const double> prior) {
  const std::vector<double> mass = MessageMass(policy, prior);
  Table scores(policy.num_states(), policy.num_messages);
  for (int s = 0; s < policy.num_states(); ++s) {
    ScaledPosteriorRow(policy, mass, s, scores.row(s));
  }
  return scores;
}

void PosteriorRow(const DeterministicMessagePolicy& policy,
                  std::span<const double> prior, std::span<const double> mass,
                  State s, std::span<double> out) {
  for (int m = 0; m < policy.num_messages; ++m) {
    if (mass[m] == 0.0) {
      out[m] = 1.0;
    } else {
      out[m] = policy.assignment[s] == m ? prior[s] / mass[m] : 0.0;
    }
  }
}

void PosteriorColumn(const DeterministicMessagePolicy& policy,
                     std::span<const double> prior,
                     std::span<const double> mass, Message m,
                     std::span<double> out) {
  for (int s = 0; s < policy.num_states(); ++s) {
    if (mass[m] == 0.0) {
      out[s] = 1.0;
    } else {
      out[s] = policy.assignment[s] == m ? prior[s] / mass[m] : 0.0;
    }
  }
}

int ArgmaxRandomTie(std::span<const double> values, Rng& rng) {
  const int n = static_cast<int>(values.size());
  double best = values[0];
  int ties = 1;
  int best_index = 0;
  for (int i = 1; i < n; ++i) {
    if (values[i] > best) {
      best = values[i];
      best_index = i;
      ties = 1;
    } else if (values[i] == best) {
      ++ties;
    }
  }
  if (ties == 1) return best_index;
  int pick = UniformIndex(rng, ties);
  for (int i = best_index; i < n; ++i) {
    if (values[i] == best && pick-- == 0) return i;
  }
  return best_index;  // unreachable
}

MarginalEstimate::MarginalEstimate(int num_messages, double weight,
                                   AccumulationMode mode)
    : estimate_(num_messages, 1.0 / num_messages),
      rollout_mean_(num_messages, 0.0),
      weight_(weight),
      mode_(mode) {
  if (num_messages < 1) throw std::invalid_argument("need at least one message");
  if (!(weight >= 0.0 && weight < 1.0)) {
    throw std::invalid_argument("marginal weight must lie in [0, 1)");
  }
}

void MarginalEstimate::Accumulate(Message chosen, std::span<const double> row,
                                  int rollout_length) {
  const double scale = 1.0 / rollout_length;
  if (mode_ == AccumulationMode::kPseudocodeLiteral) {
    rollout_mean_[chosen] += row[chosen] * scale;
  } else {
    for (std::size_t m = 0; m < rollout_mean_.size(); ++m) {
      rollout_mean_[m] += row[m] * scale;
    }
  }
}

void MarginalEstimate::Finalize() {
  for (std::size_t m = 0; m < estimate_.size(); ++m) {
    const double next = weight_ * estimate_[m] + (1.0 - weight_) * rollout_mean_[m];
    estimate_[m] = next < kFloor ? kFloor : next;
    rollout_mean_[m] = 0.0;
  }
}

void ScaledScoreRow(std::span<const double> row, const MarginalEstimate& marginal,
                    std::span<double> out) {
  const auto estimate = marginal.estimate();
  for (std::size_t m = 0; m < row.size(); ++m) out[m] = row[m] / estimate[m];
}

}  // namespace sigbench
