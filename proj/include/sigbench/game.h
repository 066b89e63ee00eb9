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

#ifndef SIGBENCH_GAME_H_
#define SIGBENCH_GAME_H_

#include <string>
#include <string_view>
#include <vector>

#include "sigbench/rng.h"
#include "sigbench/table.h"

namespace sigbench {

using State = int;
using Message = int;
using Action = int;

// Reward table R(s, a) with every entry in [0, 1] and maximum exactly 1.
class PayoffMatrix {
 public:
  // Divides every entry by the maximum. Rejects non-finite or negative
  // entries and all-zero matrices.
  static PayoffMatrix Normalize(const Table& raw);

  int num_states() const { return values_.rows(); }
  int num_actions() const { return values_.cols(); }
  double operator()(State s, Action a) const { return values_(s, a); }
  double StateMax(State s) const { return state_max_[s]; }
  const Table& values() const { return values_; }

  bool operator==(const PayoffMatrix& other) const {
    return values_ == other.values_;
  }

 private:
  explicit PayoffMatrix(Table values);

  Table values_;
  std::vector<double> state_max_;
};

// CSV form: one row per state, comma-separated decimal reals. Parsing
// normalizes, so any non-negative table with a positive entry is accepted.
std::string PayoffToCsv(const PayoffMatrix& payoff);
PayoffMatrix PayoffFromCsv(std::string_view text);

struct StepResult {
  double reward;
  // reward / max_a' R(s, a'); exactly 1 for a per-state optimal action.
  double normalized_reward;
};

// One-shot cooperative signaling game: a uniform random state is shown to the
// sender, the sender emits one of num_messages cheap-talk messages, the
// receiver picks an action, and both agents receive R(state, action).
class SignalingGame {
 public:
  // num_messages <= 0 means "same as the number of states".
  explicit SignalingGame(PayoffMatrix payoff, int num_messages = 0);

  const PayoffMatrix& payoff() const { return payoff_; }
  int num_states() const { return payoff_.num_states(); }
  int num_messages() const { return num_messages_; }
  int num_actions() const { return payoff_.num_actions(); }

  State SampleState(Rng& rng) const;
  StepResult Step(State s, Action a) const;
  double NormalizedReward(State s, Action a) const;
  bool IsOptimalAction(State s, Action a) const;

 private:
  PayoffMatrix payoff_;
  int num_messages_;
};

// Classic climbing-game payoffs before normalization.
Table ClimbingRawPayoffs();

// Climbing game mapped affinely onto [0, 1]: (v + 30) / 41.
SignalingGame ClimbingGame();

// n x n payoffs drawn uniformly from [0, 1) then max-normalized.
SignalingGame GenerateRandomGame(int n, Rng& rng);

}  // namespace sigbench

#endif  // SIGBENCH_GAME_H_
