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

#include <cmath>
#include <stdexcept>

#include "sigbench/game.h"
#include "test_util.h"

namespace sigbench {
namespace {

using testing::MakeTable;

TEST_CASE("normalize divides by the maximum") {
  const PayoffMatrix p = PayoffMatrix::Normalize(MakeTable({{0.5, 0.25}, {0.1, 0.4}}));
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p(1, 1) == doctest::Approx(0.8).epsilon(1e-15));

  const PayoffMatrix flat = PayoffMatrix::Normalize(MakeTable({{3, 3}, {3, 3}}));
  for (double v : flat.values().data()) CHECK(v == 1.0);

  const Table unit = MakeTable({{1.0, 0.3}, {0.7, 0.0}});
  CHECK(PayoffMatrix::Normalize(unit).values() == unit);
}

TEST_CASE("normalize rejects bad input") {
  CHECK_THROWS_AS(PayoffMatrix::Normalize(MakeTable({{0, 0}, {0, 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix::Normalize(MakeTable({{1, -0.1}})), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix::Normalize(MakeTable({{1, NAN}})), std::invalid_argument);
  CHECK_THROWS_AS(PayoffMatrix::Normalize(MakeTable({{1, INFINITY}})),
                  std::invalid_argument);
  CHECK_THROWS(PayoffMatrix::Normalize(Table(0, 0)));
}

TEST_CASE("random games") {
  Rng rng(42);
  const SignalingGame g = GenerateRandomGame(3, rng);
  CHECK(g.num_states() == 3);
  CHECK(g.num_actions() == 3);
  CHECK(g.num_messages() == 3);
  double peak = 0.0;
  for (double v : g.payoff().values().data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    peak = std::max(peak, v);
  }
  CHECK(peak == 1.0);

  Rng a(7), b(7);
  CHECK(GenerateRandomGame(32, a).payoff() == GenerateRandomGame(32, b).payoff());

  Rng c(1);
  const SignalingGame one = GenerateRandomGame(1, c);
  CHECK(one.payoff()(0, 0) == 1.0);

  Rng d(1);
  CHECK_THROWS_AS(GenerateRandomGame(0, d), std::invalid_argument);
}

TEST_CASE("climbing game matches the affine normalization") {
  // Oracle: the classic climbing payoffs mapped by (v - min) / (max - min).
  const double raw[3][3] = {{11, -30, 0}, {-30, 7, 6}, {0, 0, 5}};
  const SignalingGame g = ClimbingGame();
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 3; ++a) {
      CHECK(g.payoff()(s, a) == doctest::Approx((raw[s][a] + 30.0) / 41.0).epsilon(1e-15));
    }
  }
  const double approx[3][3] = {{1.0, 0.0, 0.7317}, {0.0, 0.9024, 0.8780},
                               {0.7317, 0.7317, 0.8537}};
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 3; ++a) {
      CHECK(std::abs(g.payoff()(s, a) - approx[s][a]) < 5e-5);
    }
  }
  CHECK(g.IsOptimalAction(1, 1));
  CHECK_FALSE(g.IsOptimalAction(1, 2));
  CHECK(g.payoff()(1, 1) - g.payoff()(1, 2) < 0.03);
  CHECK(g.payoff()(0, 0) == 1.0);
}

TEST_CASE("state sampling") {
  Rng rng(3);
  const SignalingGame single(PayoffMatrix::Normalize(MakeTable({{1.0}})));
  for (int i = 0; i < 100; ++i) CHECK(single.SampleState(rng) == 0);

  Rng a(9), b(9);
  const SignalingGame g = ClimbingGame();
  for (int i = 0; i < 100; ++i) CHECK(g.SampleState(a) == g.SampleState(b));

  // Binomial(30000, 1/3) has sd ~ 82; [0.31, 0.36] is more than 8 sd wide.
  Rng r(11);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[g.SampleState(r)];
  for (int c : counts) {
    CHECK(c / 30000.0 >= 0.31);
    CHECK(c / 30000.0 <= 0.36);
  }
}

TEST_CASE("step rewards") {
  const SignalingGame g = ClimbingGame();
  StepResult r = g.Step(1, 1);
  CHECK(r.reward == doctest::Approx(37.0 / 41.0).epsilon(1e-15));
  CHECK(r.normalized_reward == 1.0);
  r = g.Step(0, 1);
  CHECK(r.reward == 0.0);
  CHECK(r.normalized_reward == 0.0);
  for (int s = 0; s < 3; ++s) {
    const Action best = ArgmaxLowest(g.payoff().values().row(s));
    CHECK(g.Step(s, best).normalized_reward == 1.0);
    for (int a = 0; a < 3; ++a) {
      CHECK((g.Step(s, a).normalized_reward == 1.0) == g.IsOptimalAction(s, a));
      CHECK(g.Step(s, a).reward == g.Step(s, a).reward);
    }
  }
  CHECK_THROWS_AS(g.Step(3, 0), std::out_of_range);
  CHECK_THROWS_AS(g.Step(0, -1), std::out_of_range);
}

TEST_CASE("all-zero rows count as optimal everywhere") {
  const SignalingGame g(PayoffMatrix::Normalize(MakeTable({{1, 0.5}, {0, 0}})));
  CHECK(g.Step(1, 0).normalized_reward == 1.0);
  CHECK(g.IsOptimalAction(1, 1));
}

TEST_CASE("payoff CSV round trip and diagnostics") {
  const PayoffMatrix p = ClimbingGame().payoff();
  CHECK(PayoffFromCsv(PayoffToCsv(p)) == p);
  const PayoffMatrix q = PayoffFromCsv("2,1\n0,4\n");
  CHECK(q(1, 1) == 1.0);
  CHECK(q(0, 0) == 0.5);
  try {
    PayoffFromCsv("1,2\n3,x\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS(PayoffFromCsv("1,2\n3\n"));
  CHECK_THROWS(PayoffFromCsv(""));
}

TEST_CASE("explicit message count") {
  const SignalingGame g(ClimbingGame().payoff(), 5);
  CHECK(g.num_messages() == 5);
  CHECK(ClimbingGame().num_messages() == 3);
}

}  // namespace
}  // namespace sigbench
