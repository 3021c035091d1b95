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

// Experiment harness: estimator MSE comparisons against the exact value,
// the convergence of normalized coalition sizes to U[0,1], and the
// bias-bound versus Monte Carlo error curves.

#ifndef DSVAL_BENCH_H_
#define DSVAL_BENCH_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "dsval/empirical_game.h"
#include "dsval/estimators.h"
#include "dsval/game.h"

namespace dsval {

struct SizeDistribution {
  enum class Kind { kUniformRange, kPowersOfTwo, kExplicit };
  Kind kind = Kind::kUniformRange;
  int64_t lo = 1;
  int64_t hi = 100;
  std::vector<int64_t> sizes;  // kExplicit

  // "uniform:lo:hi", "pow2", or "explicit:a,b,c".
  static SizeDistribution Parse(const std::string& spec);
  std::string ToString() const;
  // kPowersOfTwo gives n_i = 2^i for i = 1..I.
  GameSpec Draw(int num_players, uint64_t seed) const;
};

struct ComparisonConfig {
  int num_players = 10;
  SizeDistribution size_distribution;
  std::vector<Method> methods;
  int64_t budget_terms = 10;
  int estimations_per_mse = 25;
  int mse_repetitions = 10;
  uint64_t master_seed = 0;

  void Validate() const;
};

// A game as the harness sees it: the normalized set utility used by the exact
// reference and the sampling estimators, and a routine producing the DU and
// DU++ estimates. `proxy_seeded` is true when the latter depend on the seed.
struct ComparisonGame {
  GameSpec spec;
  SetUtility utility;
  std::function<ValuationVector(Method, uint64_t seed)> du_estimate;
  bool proxy_seeded = false;
};

// Normalizes w so that w(0) = 0; DU and DU++ ignore the seed.
ComparisonGame MakeCardinalComparisonGame(const CardinalUtility& w,
                                          const GameSpec& game);

// Set utility from MakeEmpiricalSetUtility; DU and DU++ build per-player
// proxies seeded by the seed they are handed.
ComparisonGame MakeEmpiricalComparisonGame(
    std::shared_ptr<const TabularDataset> data, const Partition& partition,
    ModelKind kind, uint64_t seed, const ProxyOptions& options = {});

struct MseRow {
  Method method;
  int64_t budget = 0;
  int repetition = 0;
  double mse = 0.0;
};

struct MseSummary {
  Method method;
  int64_t budget = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct MseTable {
  std::vector<MseRow> rows;
  std::vector<MseSummary> summaries;
  std::vector<double> exact;

  // MSE of `method` in each repetition block, in block order.
  std::vector<double> Series(Method method) const;
};

// Computes the exact reference once (checked against the permutation form
// when I <= 8), then for every method and repetition block averages the
// squared error over players and estimations. Sampling estimators run
// estimations_per_mse times per block with seeds derived from
// (master_seed, method, block, estimation) and must spend exactly
// budget_terms terms per player, which is asserted through the utility call
// counter. DU and DU++ run once per block.
MseTable RunComparison(const ComparisonConfig& config,
                       const ComparisonGame& game);

struct ConvergenceResult {
  int num_players = 0;
  int64_t samples = 0;
  std::vector<double> histogram;  // 50 bins on [0, 1], normalized to density
  double ks = 0.0;
};

// Samples K ~ U{0..I-1}, then a uniform K-subset of the first I-1 players,
// and records n_S / n_{I\{I-1}}. Returns the histogram and the
// Kolmogorov-Smirnov distance to U[0,1].
ConvergenceResult ConvergenceExperiment(const GameSpec& game, int64_t samples,
                                        uint64_t seed);

// Kolmogorov-Smirnov distance between the sample and U[0,1]; sorts `values`.
double KsDistanceToUniform(std::vector<double>& values);

// w(n) = 1 - 10^k / (10^k + n) with k fixed by the caller.
CardinalUtility SaturatingUtility(double k);
// k(I) = floor(log10(n_I)) - 1.
double SaturationExponent(int64_t n_total);

struct BoundsRow {
  int num_players = 0;
  int draw = -1;  // -1 for averaged rows
  double du_bound_mean = 0.0;
  double mc_error = 0.0;
};

struct BoundsExperimentConfig {
  std::vector<int> grid;
  int64_t n_max = 100;
  int draws = 100;
  double delta = 0.1;
  uint64_t seed = 0;
  int rho_grid_points = 200;
};

// For each I: draws sizes from U{1..n_max}, evaluates the player-averaged
// bias bound (rho estimated on a log grid over [1, n_I]) and the Monte Carlo
// error, both for w = SaturatingUtility(k(I)). Returns per-draw rows when
// `per_draw`, otherwise one averaged row per I.
std::vector<BoundsRow> BoundsExperiment(const BoundsExperimentConfig& config,
                                        bool per_draw = false);

}  // namespace dsval

#endif  // DSVAL_BENCH_H_
