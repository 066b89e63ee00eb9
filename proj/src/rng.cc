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

#include "sigbench/rng.h"

namespace sigbench {
namespace {

constexpr std::uint64_t kMatrixStreamTag = 0x6d61747269780000ULL;

}  // namespace

std::uint64_t MixSeed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t DeriveRunSeed(std::uint64_t master, std::uint64_t matrix_index,
                            std::uint64_t run_index) {
  return MixSeed(MixSeed(MixSeed(master) ^ matrix_index) ^ run_index);
}

std::uint64_t SubstreamSeed(std::uint64_t run_seed, Stream stream) {
  return MixSeed(run_seed ^ MixSeed(static_cast<std::uint64_t>(stream) + 1));
}

std::uint64_t MatrixSeed(std::uint64_t master, std::uint64_t matrix_index,
                         std::uint64_t pool) {
  return DeriveRunSeed(MixSeed(master ^ (kMatrixStreamTag + pool)),
                       matrix_index, ~std::uint64_t{0});
}

}  // namespace sigbench
