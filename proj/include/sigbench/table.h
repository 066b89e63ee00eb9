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

#ifndef SIGBENCH_TABLE_H_
#define SIGBENCH_TABLE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace sigbench {

// Dense row-major matrix of doubles. Used for payoffs, Q-tables, softmax
// parameters and posterior scores.
class Table {
 public:
  Table() = default;
  Table(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[Index(r, c)]; }
  double operator()(int r, int c) const { return data_[Index(r, c)]; }

  std::span<double> row(int r) {
    return {data_.data() + Index(r, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const double> row(int r) const {
    return {data_.data() + Index(r, 0), static_cast<std::size_t>(cols_)};
  }

  const std::vector<double>& data() const { return data_; }
  void Fill(double value);

  bool operator==(const Table&) const = default;

 private:
  std::size_t Index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// First index attaining the maximum.
int ArgmaxLowest(std::span<const double> values);

// All indices attaining the maximum (exact comparison), in increasing order.
void ArgmaxSet(std::span<const double> values, std::vector<int>* out);

}  // namespace sigbench

#endif  // SIGBENCH_TABLE_H_
