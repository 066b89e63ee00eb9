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

#include "sigbench/game.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace sigbench {

PayoffMatrix::PayoffMatrix(Table values) : values_(std::move(values)) {
  state_max_.resize(values_.rows());
  for (int s = 0; s < values_.rows(); ++s) {
    auto row = values_.row(s);
    state_max_[s] = *std::max_element(row.begin(), row.end());
  }
}

PayoffMatrix PayoffMatrix::Normalize(const Table& raw) {
  if (raw.rows() < 1 || raw.cols() < 1) {
    throw std::invalid_argument("payoff matrix needs at least one state and one action");
  }
  double max_value = 0.0;
  for (double v : raw.data()) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("payoff matrix has a non-finite entry");
    }
    if (v < 0.0) {
      throw std::invalid_argument("payoff matrix has a negative entry");
    }
    max_value = std::max(max_value, v);
  }
  if (max_value <= 0.0) {
    throw std::invalid_argument("payoff matrix is all zero");
  }
  Table values(raw.rows(), raw.cols());
  for (int s = 0; s < raw.rows(); ++s) {
    for (int a = 0; a < raw.cols(); ++a) values(s, a) = raw(s, a) / max_value;
  }
  return PayoffMatrix(std::move(values));
}

std::string PayoffToCsv(const PayoffMatrix& payoff) {
  std::string out;
  char buf[32];
  for (int s = 0; s < payoff.num_states(); ++s) {
    for (int a = 0; a < payoff.num_actions(); ++a) {
      if (a > 0) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", payoff(s, a));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

PayoffMatrix PayoffFromCsv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::vector<double> row;
    while (true) {
      const std::size_t comma = line.find(',');
      std::string field(line.substr(0, comma));
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw std::invalid_argument("empty payoff field on line " + std::to_string(line_no));
      }
      field = field.substr(first, last - first + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed payoff '" + field + "' on line " +
                                    std::to_string(line_no));
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("ragged payoff row on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("payoff CSV has no rows");
  Table raw(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int s = 0; s < raw.rows(); ++s) {
    for (int a = 0; a < raw.cols(); ++a) raw(s, a) = rows[s][a];
  }
  return PayoffMatrix::Normalize(raw);
}

SignalingGame::SignalingGame(PayoffMatrix payoff, int num_messages)
    : payoff_(std::move(payoff)),
      num_messages_(num_messages > 0 ? num_messages : payoff_.num_states()) {}

State SignalingGame::SampleState(Rng& rng) const {
  return UniformIndex(rng, num_states());
}

StepResult SignalingGame::Step(State s, Action a) const {
  if (s < 0 || s >= num_states() || a < 0 || a >= num_actions()) {
    throw std::out_of_range("state or action index out of range");
  }
  return {payoff_(s, a), NormalizedReward(s, a)};
}

double SignalingGame::NormalizedReward(State s, Action a) const {
  // An all-zero row makes every action optimal.
  const double best = payoff_.StateMax(s);
  return best > 0.0 ? payoff_(s, a) / best : 1.0;
}

bool SignalingGame::IsOptimalAction(State s, Action a) const {
  return payoff_(s, a) >= payoff_.StateMax(s) - 1e-9;
}

Table ClimbingRawPayoffs() {
  Table raw(3, 3);
  const double v[3][3] = {{11, -30, 0}, {-30, 7, 6}, {0, 0, 5}};
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 3; ++a) raw(s, a) = v[s][a];
  }
  return raw;
}

SignalingGame ClimbingGame() {
  Table raw = ClimbingRawPayoffs();
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 3; ++a) raw(s, a) = (raw(s, a) + 30.0) / 41.0;
  }
  return SignalingGame(PayoffMatrix::Normalize(raw));
}

SignalingGame GenerateRandomGame(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random game size must be >= 1");
  Table raw(n, n);
  bool any_positive = false;
  while (!any_positive) {
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < n; ++a) {
        raw(s, a) = Uniform01(rng);
        any_positive = any_positive || raw(s, a) > 0.0;
      }
    }
  }
  return SignalingGame(PayoffMatrix::Normalize(raw));
}

}  // namespace sigbench
