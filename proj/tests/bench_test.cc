// Copyright 2026 The dsval Authors
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

#include "dsval/bench.h"

#include <cmath>

#include <gtest/gtest.h>

#include "dsval/parallel.h"
#include "dsval/regression_game.h"

namespace dsval {
namespace {

const CardinalUtility kSqrt([](double n) { return std::sqrt(n); });

ComparisonConfig SmallConfig(int num_players, std::vector<Method> methods) {
  ComparisonConfig config;
  config.num_players = num_players;
  config.methods = std::move(methods);
  config.budget_terms = num_players % 2 ? num_players + 1 : num_players;
  config.estimations_per_mse = 5;
  config.mse_repetitions = 3;
  config.master_seed = 1;
  return config;
}

TEST(SizeDistributionTest, ParseAndDraw) {
  const auto uniform = SizeDistribution::Parse("uniform:10:1000");
  EXPECT_EQ(uniform.ToString(), "uniform:10:1000");
  const GameSpec g = uniform.Draw(50, 3);
  for (int64_t n : g.sizes()) {
    EXPECT_GE(n, 10);
    EXPECT_LE(n, 1000);
  }
  EXPECT_EQ(uniform.Draw(50, 3).sizes(), g.sizes());
  EXPECT_NE(uniform.Draw(50, 4).sizes(), g.sizes());

  EXPECT_EQ(SizeDistribution::Parse("pow2").Draw(4, 0).sizes(),
            (std::vector<int64_t>{2, 4, 8, 16}));
  const auto explicit_sizes = SizeDistribution::Parse("explicit:3,1,4");
  EXPECT_EQ(explicit_sizes.ToString(), "explicit:3,1,4");
  EXPECT_EQ(explicit_sizes.Draw(3, 0).sizes(), (std::vector<int64_t>{3, 1, 4}));
  EXPECT_THROW(explicit_sizes.Draw(4, 0), std::invalid_argument);

  EXPECT_THROW(SizeDistribution::Parse("uniform:5"), std::invalid_argument);
  EXPECT_THROW(SizeDistribution::Parse("uniform:9:3"), std::invalid_argument);
  EXPECT_THROW(SizeDistribution::Parse("normal:1:2"), std::invalid_argument);
}

TEST(ComparisonConfigTest, Validation) {
  ComparisonConfig config = SmallConfig(4, {Method::kMonteCarlo});
  EXPECT_NO_THROW(config.Validate());
  config.estimations_per_mse = 1;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig(4, {Method::kMonteCarlo});
  config.mse_repetitions = 1;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig(4, {Method::kAntithetic});
  config.budget_terms = 3;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig(4, {});
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

TEST(RunComparisonTest, ExactHasZeroError) {
  const GameSpec g({1, 2, 4, 8});
  const auto table =
      RunComparison(SmallConfig(4, {Method::kExact}), MakeCardinalComparisonGame(kSqrt, g));
  for (const auto& row : table.rows) EXPECT_EQ(row.mse, 0.0);
  EXPECT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[0].budget, 8);
}

TEST(RunComparisonTest, DuIsExactForEqualSizes) {
  const GameSpec g(std::vector<int64_t>(6, 25));
  const auto table = RunComparison(SmallConfig(6, {Method::kDu, Method::kDuPlusPlus}),
                                   MakeCardinalComparisonGame(kSqrt, g));
  for (const auto& row : table.rows) EXPECT_LE(row.mse, 1e-20);
}

TEST(RunComparisonTest, SummariesAndSeries) {
  const GameSpec g({3, 9, 27, 81});
  const auto table = RunComparison(
      SmallConfig(4, {Method::kMonteCarlo, Method::kOwen, Method::kDu}),
      MakeCardinalComparisonGame(kSqrt, g));
  ASSERT_EQ(table.rows.size(), 9u);
  ASSERT_EQ(table.summaries.size(), 3u);
  for (const auto& s : table.summaries) {
    const auto series = table.Series(s.method);
    ASSERT_EQ(series.size(), 3u);
    double mean = 0.0;
    for (double v : series) {
      EXPECT_GE(v, 0.0);
      EXPECT_GE(v, s.min);
      EXPECT_LE(v, s.max);
      mean += v / 3.0;
    }
    EXPECT_NEAR(mean, s.mean, 1e-15 * std::max(1.0, mean));
  }
  // Deterministic methods yield the same MSE in every block.
  const auto du = table.Series(Method::kDu);
  EXPECT_EQ(du[0], du[1]);
  EXPECT_EQ(du[1], du[2]);
  EXPECT_EQ(table.rows[0].budget, 4);
}

TEST(RunComparisonTest, DeterministicAcrossRunsAndThreadCounts) {
  const GameSpec g({5, 50, 500, 7, 70});
  const auto game = MakeCardinalComparisonGame(kSqrt, g);
  const auto config = SmallConfig(
      5, {Method::kMonteCarlo, Method::kAntithetic, Method::kOwen, Method::kDuPlusPlus});
  SetMaxThreads(1);
  const auto a = RunComparison(config, game);
  SetMaxThreads(4);
  const auto b = RunComparison(config, game);
  SetMaxThreads(1);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) EXPECT_EQ(a.rows[r].mse, b.rows[r].mse);
}

TEST(RunComparisonTest, DuBeatsMcOnRegressionGame) {
  ComparisonConfig config;
  config.num_players = 10;
  config.methods = {Method::kMonteCarlo, Method::kDu, Method::kDuPlusPlus};
  config.budget_terms = 10;
  config.master_seed = 5;
  const GameSpec g = SizeDistribution::Parse("uniform:10:1000").Draw(10, 5);
  const auto table = RunComparison(
      config, MakeCardinalComparisonGame(
                  ClosedFormUtility(RegressionGameParams::Make(10, 1.0)), g));
  const auto mc = table.Series(Method::kMonteCarlo);
  const auto du = table.Series(Method::kDu);
  const auto pp = table.Series(Method::kDuPlusPlus);
  int du_wins = 0, pp_wins = 0;
  for (int b = 0; b < 10; ++b) {
    du_wins += du[b] <= mc[b];
    pp_wins += pp[b] <= mc[b];
  }
  EXPECT_GE(du_wins, 8);
  EXPECT_GE(pp_wins, 8);
}

TEST(RunComparisonTest, RejectsInfeasibleReference) {
  const GameSpec g(std::vector<int64_t>(26, 1));
  EXPECT_THROW(RunComparison(SmallConfig(26, {Method::kDu}),
                             MakeCardinalComparisonGame(kSqrt, g)),
               std::invalid_argument);
  EXPECT_THROW(RunComparison(SmallConfig(3, {Method::kDu}),
                             MakeCardinalComparisonGame(kSqrt, GameSpec({1, 2}))),
               std::invalid_argument);
}

TEST(KsTest, KnownValues) {
  std::vector<double> midpoints;
  for (int k = 0; k < 100; ++k) midpoints.push_back((k + 0.5) / 100.0);
  EXPECT_NEAR(KsDistanceToUniform(midpoints), 0.005, 1e-15);
  std::vector<double> atom(10, 0.0);
  EXPECT_DOUBLE_EQ(KsDistanceToUniform(atom), 1.0);
  std::vector<double> empty;
  EXPECT_THROW(KsDistanceToUniform(empty), std::invalid_argument);
}

TEST(ConvergenceTest, EqualSizesGiveEquallySpacedAtoms) {
  // n_bar = K / (I - 1) with K uniform on 0..I-1: KS is about 1 / I.
  const int I = 20;
  const auto result = ConvergenceExperiment(GameSpec(std::vector<int64_t>(I, 5)), 50000, 1);
  EXPECT_NEAR(result.ks, 1.0 / I, 0.01);
  ASSERT_EQ(result.histogram.size(), 50u);
  double mass = 0.0;
  for (double h : result.histogram) mass += h / 50.0;
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(ConvergenceTest, KsShrinksWithPlayersAndIsStableInSamples) {
  const auto dist = SizeDistribution::Parse("uniform:1:100");
  const auto small = ConvergenceExperiment(dist.Draw(10, 1), 100000, 2);
  const auto large = ConvergenceExperiment(dist.Draw(500, 1), 100000, 2);
  EXPECT_LT(large.ks, small.ks);
  const auto doubled = ConvergenceExperiment(dist.Draw(10, 1), 200000, 3);
  EXPECT_NEAR(doubled.ks, small.ks, 0.01);
}

TEST(ConvergenceTest, Validation) {
  EXPECT_THROW(ConvergenceExperiment(GameSpec({5}), 1000, 0), std::invalid_argument);
  EXPECT_THROW(ConvergenceExperiment(GameSpec({5, 5}), 999, 0), std::invalid_argument);
  EXPECT_THROW(ConvergenceExperiment(GameSpec({0, 0, 5}), 1000, 0), std::invalid_argument);
}

TEST(SaturationTest, ExponentAndUtility) {
  EXPECT_EQ(SaturationExponent(5), -1.0);
  EXPECT_EQ(SaturationExponent(100), 1.0);
  EXPECT_EQ(SaturationExponent(999), 1.0);
  EXPECT_EQ(SaturationExponent(1000), 2.0);
  EXPECT_THROW(SaturationExponent(0), std::invalid_argument);
  const CardinalUtility w = SaturatingUtility(2.0);
  EXPECT_DOUBLE_EQ(w(100.0), 0.5);
  EXPECT_DOUBLE_EQ(w(0.0), 0.0);
}

TEST(BoundsExperimentTest, RowsAndPerDraw) {
  BoundsExperimentConfig config;
  config.grid = {3, 10};
  config.draws = 4;
  config.seed = 9;
  const auto averaged = BoundsExperiment(config);
  const auto per_draw = BoundsExperiment(config, true);
  ASSERT_EQ(averaged.size(), 2u);
  ASSERT_EQ(per_draw.size(), 8u);
  double mean = 0.0;
  for (int d = 0; d < 4; ++d) {
    EXPECT_EQ(per_draw[d].num_players, 3);
    EXPECT_EQ(per_draw[d].draw, d);
    mean += per_draw[d].du_bound_mean / 4.0;
  }
  EXPECT_NEAR(averaged[0].du_bound_mean, mean, 1e-12 * mean);
  EXPECT_EQ(averaged[0].draw, -1);
  config.grid = {1};
  EXPECT_THROW(BoundsExperiment(config), std::invalid_argument);
}

TEST(BoundsExperimentTest, SpreadShrinksWithDraws) {
  auto spread = [](int draws) {
    std::vector<double> means;
    for (uint64_t seed = 0; seed < 12; ++seed) {
      BoundsExperimentConfig config;
      config.grid = {20};
      config.draws = draws;
      config.seed = seed;
      means.push_back(BoundsExperiment(config)[0].du_bound_mean);
    }
    double m = 0.0, s = 0.0;
    for (double v : means) m += v / means.size();
    for (double v : means) s += (v - m) * (v - m);
    return std::sqrt(s / (means.size() - 1));
  };
  EXPECT_LT(spread(100), 0.5 * spread(1));
}

}  // namespace
}  // namespace dsval
