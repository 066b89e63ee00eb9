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

#include "sigbench/table.h"

#include <algorithm>
#include <stdexcept>

namespace sigbench {

Table::Table(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("Table dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

void Table::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

int ArgmaxLowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void ArgmaxSet(std::span<const double> values, std::vector<int>* out) {
  out->clear();
  if (values.empty()) return;
  const double best = *std::max_element(values.begin(), values.end());
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (values[i] == best) out->push_back(i);
  }
}

}  // namespace sigbench
