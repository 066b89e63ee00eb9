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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>
#include <string>

#include "sigbench/tuner.h"

namespace sigbench {
namespace {

TuneSettings SmallSettings() {
  TuneSettings s;
  s.matrices = 10;
  s.runs_per_matrix = 50;
  s.episodes = 1000;
  s.eval_every = 100;
  s.master_seed = 3;
  s.threads = 2;
  return s;
}

TEST_CASE("grid cardinality and ordering") {
  GridSpec grid;
  grid.base = Preset(Algorithm::kHysteretic, PresetBank::k3x3);
  grid.axes = {{"alpha", {0.1, 0.5}}, {std::string(kBetaRatioAxis), {0.1, 1, 10}}};
  CHECK(grid.Cardinality() == 6);
  CHECK(grid.Point(0) == std::vector<double>{0.1, 0.1});
  CHECK(grid.Point(1) == std::vector<double>{0.1, 1});
  CHECK(grid.Point(3) == std::vector<double>{0.5, 0.1});
  const AgentSpec spec = grid.Apply(grid.Point(5));
  CHECK(spec.alpha == 0.5);
  CHECK(spec.beta == 5.0);
}

TEST_CASE("default grids") {
  const GridSpec hyst = DefaultGrid(Algorithm::kHysteretic, PresetBank::k3x3);
  const auto it = std::find_if(hyst.axes.begin(), hyst.axes.end(),
                               [](const GridAxis& a) { return a.name == kBetaRatioAxis; });
  REQUIRE(it != hyst.axes.end());
  CHECK(it->values == std::vector<double>{0.1, 1, 10});
  for (Algorithm a : AllAlgorithms()) {
    for (PresetBank bank : {PresetBank::k3x3, PresetBank::k32x32}) {
      const GridSpec g = DefaultGrid(a, bank);
      CHECK_NOTHROW(g.Validate());
      CHECK(g.Cardinality() >= 1);
    }
  }
  CHECK(DefaultGrid(Algorithm::kIql, PresetBank::k3x3).Cardinality() == 16);
}

TEST_CASE("grid validation") {
  GridSpec grid;
  grid.base = Preset(Algorithm::kIql, PresetBank::k3x3);
  CHECK_THROWS_AS(grid.Validate(), std::invalid_argument);
  grid.axes = {{"alpha", {}}};
  CHECK_THROWS_AS(grid.Validate(), std::invalid_argument);
  grid.axes = {{"bogus", {1.0}}};
  CHECK_THROWS_AS(grid.Validate(), std::invalid_argument);
  grid.axes = {{"alpha", {1.0}}, {"alpha", {0.5}}};
  CHECK_THROWS_AS(grid.Validate(), std::invalid_argument);
}

TEST_CASE("tie-break chain") {
  TuningRow a{{0.1}, 100, 50, 0, 0.5, 0.9};
  TuningRow b{{0.5}, 100, 60, 0, 0.6, 0.1};
  CHECK(RanksAbove(b, a));
  b.pct_optimal = 0.5;
  CHECK(RanksAbove(a, b));  // higher mean reward
  b.mean_reward = 0.9;
  CHECK(RanksAbove(a, b));  // smaller parameter vector
  CHECK_FALSE(RanksAbove(b, a));
  CHECK(SelectBest({b, a}) == 1);
  CHECK(SelectBest({a}) == 0);
  CHECK_THROWS_AS(SelectBest({}), std::invalid_argument);
}

TEST_CASE("single point grid wins") {
  GridSpec grid;
  grid.base = Preset(Algorithm::kIql, PresetBank::k3x3);
  grid.axes = {{"alpha", {0.1}}};
  TuneSettings s = SmallSettings();
  s.matrices = 2;
  s.runs_per_matrix = 5;
  s.episodes = 50;
  s.eval_every = 10;
  const TuningResult r = GridSearch(grid, s);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.best == 0);
  CHECK(r.best_spec == grid.Apply({0.1}));
}

TEST_CASE("learning beats no learning") {
  GridSpec grid;
  grid.base = Preset(Algorithm::kIql, PresetBank::k3x3);
  grid.axes = {{"alpha", {0.0, 0.1}}};
  const TuneSettings settings = SmallSettings();
  const TuningResult r = GridSearch(grid, settings);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.best == 1);
  CHECK(r.rows[1].pct_optimal > r.rows[0].pct_optimal);
  for (const TuningRow& row : r.rows) {
    CHECK(row.runs == 500);
    CHECK(row.pct_optimal ==
          static_cast<double>(row.optimal_runs) / static_cast<double>(row.runs));
  }

  const std::string csv = TuningCsv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.rfind("alpha,runs,optimal_runs,failures,pct_optimal,mean_reward\n", 0) == 0);
  const auto best = BestJson(r, settings);
  CHECK(best["pct_optimal"].get<double>() == r.rows[1].pct_optimal);
  CHECK(best["params"]["alpha"].get<double>() == 0.1);
}

TEST_CASE("grid files") {
  const GridSpec g = ParseGridToml(
      "[[axis]]\nname = \"alpha\"\nvalues = [0.1, 0.5]\n\n"
      "[[axis]]\nname = \"epsilon\"\nvalues = [1, 0.3]\n",
      Algorithm::kIql, PresetBank::k3x3);
  CHECK(g.Cardinality() == 4);
  CHECK(g.axes[1].values == std::vector<double>{1.0, 0.3});

  auto error = [](std::string_view text) {
    try {
      ParseGridToml(text, Algorithm::kIql, PresetBank::k3x3);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error("[[axis]]\nname = \"alpha\"\nvalues = []\n") != "");
  CHECK(error("[[axis]]\nname = \"alpha\"\nvalues = [0.1]\nstep = 2\n")
            .find("line 1") != std::string::npos);
  CHECK(error("other = 1\n").find("unknown key") != std::string::npos);
  CHECK(error("[[axis]\n").find("line 1") != std::string::npos);
  CHECK(error("[[axis]]\nname = \"nope\"\nvalues = [1]\n") != "");
}

}  // namespace
}  // namespace sigbench
