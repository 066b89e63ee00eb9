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

#include "sigbench/config.h"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "toml.hpp"

namespace sigbench {
namespace {

[[noreturn]] void Fail(std::string_view origin, const toml::source_region& where,
                       const std::string& message) {
  std::ostringstream out;
  out << origin << ':' << where.begin.line << ": " << message;
  throw std::invalid_argument(out.str());
}

template <typename T>
T Required(std::string_view origin, const toml::node& node, std::string_view key) {
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node.value_exact<std::string>()) return *v;
    Fail(origin, node.source(), std::string(key) + " must be a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = node.value<double>()) return *v;
    Fail(origin, node.source(), std::string(key) + " must be a number");
  } else {
    if (auto v = node.value_exact<std::int64_t>()) return static_cast<T>(*v);
    Fail(origin, node.source(), std::string(key) + " must be an integer");
  }
}

Algorithm RequireAlgorithm(std::string_view origin, const toml::node& node,
                           std::string_view name) {
  const auto algorithm = ParseAlgorithm(name);
  if (!algorithm) {
    Fail(origin, node.source(), "unknown algorithm '" + std::string(name) + "'");
  }
  return *algorithm;
}

void ApplyGame(std::string_view origin, const toml::table& game,
               ExperimentFile* file) {
  for (const auto& [key, node] : game) {
    const std::string_view k = key.str();
    if (k == "kind") {
      const std::string kind = Required<std::string>(origin, node, k);
      if (kind == "climbing") {
        file->game = GameSource::Kind::kClimbing;
      } else if (kind == "random") {
        file->game = GameSource::Kind::kRandom;
      } else {
        Fail(origin, node.source(), "game.kind must be 'climbing' or 'random'");
      }
    } else if (k == "size") {
      file->size = Required<int>(origin, node, k);
    } else if (k == "matrices") {
      file->matrices = Required<int>(origin, node, k);
    } else {
      Fail(origin, node.source(), "unknown key 'game." + std::string(k) + "'");
    }
  }
}

}  // namespace

AgentSpec ExperimentFile::ResolveSpec(Algorithm algorithm) const {
  AgentSpec spec = Preset(algorithm, bank());
  const auto it = overrides.find(algorithm);
  if (it != overrides.end()) {
    for (const auto& [name, value] : it->second) spec.Set(name, value);
  }
  spec.Validate();
  return spec;
}

void ExperimentFile::Validate() const {
  if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (eval_every < 1) throw std::invalid_argument("eval cadence must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (size < 1) throw std::invalid_argument("game size must be >= 1");
  if (matrices < 1) throw std::invalid_argument("matrices must be >= 1");
  if (out.empty()) throw std::invalid_argument("output directory is empty");
  for (Algorithm a : algorithms) ResolveSpec(a);
  for (const auto& [a, params] : overrides) {
    if (std::find(algorithms.begin(), algorithms.end(), a) == algorithms.end()) {
      throw std::invalid_argument("overrides given for unselected algorithm '" +
                                  std::string(AlgorithmName(a)) + "'");
    }
  }
}

nlohmann::ordered_json ExperimentFile::ToJson() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  nlohmann::ordered_json game_json;
  if (game == GameSource::Kind::kClimbing) {
    game_json["kind"] = "climbing";
  } else {
    game_json["kind"] = "random";
    game_json["size"] = size;
    game_json["matrices"] = matrices;
  }
  j["game"] = game_json;
  j["preset"] = PresetName(bank());
  j["episodes"] = episodes;
  j["runs"] = runs;
  j["seed"] = seed;
  j["eval_every"] = eval_every;
  j["fixed"] = FixedAgentName(fixed);
  nlohmann::ordered_json algos = nlohmann::ordered_json::array();
  for (Algorithm a : algorithms) {
    const AgentSpec spec = ResolveSpec(a);
    nlohmann::ordered_json params;
    for (std::string_view p : spec.RelevantParams()) {
      params[std::string(p)] = spec.Get(p);
    }
    algos.push_back({{"name", AlgorithmName(a)}, {"params", params}});
  }
  j["algorithms"] = algos;
  return j;
}

void ApplyConfigToml(std::string_view text, std::string_view origin,
                     ExperimentFile* file) {
  toml::table doc;
  try {
    doc = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    Fail(origin, e.source(), std::string(e.description()));
  }
  for (const auto& [key, node] : doc) {
    const std::string_view k = key.str();
    if (k == "name") {
      file->name = Required<std::string>(origin, node, k);
    } else if (k == "episodes") {
      file->episodes = Required<std::int64_t>(origin, node, k);
    } else if (k == "runs") {
      file->runs = Required<int>(origin, node, k);
    } else if (k == "seed") {
      const auto seed = Required<std::int64_t>(origin, node, k);
      if (seed < 0) Fail(origin, node.source(), "seed must be >= 0");
      file->seed = static_cast<std::uint64_t>(seed);
    } else if (k == "eval_every") {
      file->eval_every = Required<std::int64_t>(origin, node, k);
    } else if (k == "out") {
      file->out = Required<std::string>(origin, node, k);
    } else if (k == "threads") {
      file->threads = Required<int>(origin, node, k);
    } else if (k == "preset") {
      const std::string name = Required<std::string>(origin, node, k);
      file->preset = ParsePreset(name);
      if (!file->preset) Fail(origin, node.source(), "unknown preset '" + name + "'");
    } else if (k == "fixed") {
      try {
        file->fixed = ParseFixedAgent(Required<std::string>(origin, node, k));
      } catch (const std::invalid_argument& e) {
        Fail(origin, node.source(), e.what());
      }
    } else if (k == "algorithms") {
      const toml::array* list = node.as_array();
      if (list == nullptr) Fail(origin, node.source(), "algorithms must be an array");
      file->algorithms.clear();
      for (const toml::node& item : *list) {
        file->algorithms.push_back(RequireAlgorithm(
            origin, item, Required<std::string>(origin, item, "algorithm name")));
      }
    } else if (k == "game") {
      const toml::table* game = node.as_table();
      if (game == nullptr) Fail(origin, node.source(), "game must be a table");
      ApplyGame(origin, *game, file);
    } else if (k == "overrides") {
      const toml::table* table = node.as_table();
      if (table == nullptr) Fail(origin, node.source(), "overrides must be a table");
      for (const auto& [algo_key, params_node] : *table) {
        const Algorithm algorithm =
            RequireAlgorithm(origin, params_node, algo_key.str());
        const toml::table* params = params_node.as_table();
        if (params == nullptr) {
          Fail(origin, params_node.source(), "overrides entries must be tables");
        }
        for (const auto& [param, value] : *params) {
          const double v = Required<double>(origin, value, param.str());
          AgentSpec probe = Preset(algorithm, PresetBank::k3x3);
          try {
            probe.Set(param.str(), v);
          } catch (const std::invalid_argument& e) {
            Fail(origin, value.source(), e.what());
          }
          file->overrides[algorithm][std::string(param.str())] = v;
        }
      }
    } else {
      Fail(origin, node.source(), "unknown key '" + std::string(k) + "'");
    }
  }
}

std::string_view FixedAgentName(FixedAgent fixed) {
  switch (fixed) {
    case FixedAgent::kNone:
      return "none";
    case FixedAgent::kSender:
      return "sender";
    case FixedAgent::kReceiver:
      return "receiver";
  }
  return "none";
}

FixedAgent ParseFixedAgent(std::string_view name) {
  if (name == "none") return FixedAgent::kNone;
  if (name == "sender") return FixedAgent::kSender;
  if (name == "receiver") return FixedAgent::kReceiver;
  throw std::invalid_argument("fixed must be none, sender or receiver");
}

std::pair<std::string, double> ParseAssignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("expected name=value, got '" + std::string(text) + "'");
  }
  const std::string value(text.substr(eq + 1));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw std::invalid_argument("not a number: '" + value + "'");
  }
  return {std::string(text.substr(0, eq)), v};
}

std::vector<Algorithm> ParseAlgorithmList(std::string_view text) {
  if (text == "all") {
    const auto all = AllAlgorithms();
    return {all.begin(), all.end()};
  }
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view name = text.substr(start, comma - start);
    const auto algorithm = ParseAlgorithm(name);
    if (!algorithm) {
      throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
    }
    if (std::find(out.begin(), out.end(), *algorithm) != out.end()) {
      throw std::invalid_argument("algorithm listed twice: '" + std::string(name) + "'");
    }
    out.push_back(*algorithm);
    start = comma + 1;
  }
  return out;
}

std::string DefaultOutputDir() {
  const char* env = std::getenv("SIGBENCH_OUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return "sigbench_out";
}

}  // namespace sigbench
