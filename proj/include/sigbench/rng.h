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

#ifndef SIGBENCH_RNG_H_
#define SIGBENCH_RNG_H_

#include <cstdint>
#include <random>

namespace sigbench {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t MixSeed(std::uint64_t z);

// Per-run seed from (master, matrix_index, run_index). Pure function of its
// arguments, so serial and parallel sweeps see the same seeds.
std::uint64_t DeriveRunSeed(std::uint64_t master, std::uint64_t matrix_index,
                            std::uint64_t run_index);

// Independent sub-streams of one run: environment, sender and receiver.
enum class Stream : std::uint64_t {
  kEnvironment = 0,
  kSender = 1,
  kReceiver = 2,
};
std::uint64_t SubstreamSeed(std::uint64_t run_seed, Stream stream);

// Seed for generating random payoff matrix `matrix_index`. `pool` separates
// evaluation matrices (0) from tuning matrices (1).
std::uint64_t MatrixSeed(std::uint64_t master, std::uint64_t matrix_index,
                         std::uint64_t pool = 0);

// Uniform double in [0, 1).
inline double Uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform integer in [0, n).
inline int UniformIndex(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

}  // namespace sigbench

#endif  // SIGBENCH_RNG_H_
