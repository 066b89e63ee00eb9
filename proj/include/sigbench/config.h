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

#ifndef SIGBENCH_CONFIG_H_
#define SIGBENCH_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sigbench/agent_spec.h"
#include "sigbench/agents.h"
#include "sigbench/harness.h"

namespace sigbench {

// Declarative experiment description. Every field is explicit after
// resolution; nothing depends on the wall clock.
struct ExperimentFile {
  std::string name = "experiment";
  GameSource::Kind game = GameSource::Kind::kClimbing;
  int size = 3;
  int matrices = 1;
  std::vector<Algorithm> algorithms;
  std::optional<PresetBank> preset;  // defaults from the game size
  // Parameter overrides per algorithm, applied on top of the preset.
  std::map<Algorithm, std::map<std::string, double>> overrides;
  std::int64_t episodes = 1000;
  int runs = 1000;
  std::uint64_t seed = 0;
  std::int64_t eval_every = 10;
  std::string out;
  int threads = 1;
  FixedAgent fixed = FixedAgent::kNone;

  PresetBank bank() const { return preset.value_or(DefaultPresetFor(size)); }
  AgentSpec ResolveSpec(Algorithm algorithm) const;
  // Throws std::invalid_argument.
  void Validate() const;
  // Full resolved configuration except the thread count, which does not
  // affect results.
  nlohmann::ordered_json ToJson() const;
};

// Fields present in a TOML config. Unknown keys are rejected with the line.
// Throws std::invalid_argument with "<origin>:<line>: ..." diagnostics.
void ApplyConfigToml(std::string_view text, std::string_view origin,
                     ExperimentFile* file);

std::string_view FixedAgentName(FixedAgent fixed);
FixedAgent ParseFixedAgent(std::string_view name);

// "name=value" override; throws std::invalid_argument.
std::pair<std::string, double> ParseAssignment(std::string_view text);

// Parses "info-q,iql" or "all".
std::vector<Algorithm> ParseAlgorithmList(std::string_view text);

// SIGBENCH_OUT_DIR if set and non-empty, otherwise "sigbench_out".
std::string DefaultOutputDir();

}  // namespace sigbench

#endif  // SIGBENCH_CONFIG_H_
