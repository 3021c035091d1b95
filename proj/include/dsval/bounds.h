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

// Error analysis for DU-type estimators: the bias bound for DU, the Monte
// Carlo error at a budget of I permutations, and a numerical estimate of the
// curvature constant rho with n^2 |w''(n)| <= rho |w(n)|.

#ifndef DSVAL_BOUNDS_H_
#define DSVAL_BOUNDS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsval/game.h"

namespace dsval {

// Size moments of everyone except `player`.
struct SizeStats {
  double mu_minus_i = 0.0;
  double sigma2_minus_i = 0.0;
  double r_minus_i = 0.0;  // max_j |n_j - mu_{-i}|
  int64_t n_max_minus_i = 0;
  int64_t n_excl_i = 0;  // n_{I\{i}}
};

// Requires I >= 2.
SizeStats ComputeSizeStats(const GameSpec& game, int player);

// `points` values spaced evenly in log between lo > 0 and hi >= lo.
std::vector<double> LogGrid(double lo, double hi, int points);

// Central second difference with step h = max(1e-3 n, 1e-3), clamped so the
// left point stays >= 0.
double SecondDerivative(const CardinalUtility& w, double n);

// max over the grid of n^2 |w''(n)| / |w(n)|. Points with w(n) == 0 are
// skipped; throws std::invalid_argument when every point is skipped or a grid
// point is not positive.
double EstimateRho(const CardinalUtility& w, std::span<const double> grid);

// [rho |w(n_{I\{i}})| / ((I-1) mu_{-i}^2)] *
//   (9 sigma2_{-i} (1 + ln(I-1)) + 2 R_{-i}^2 n^max_{-i}).
// Throws std::invalid_argument for I < 2, rho < 0, or mu_{-i} == 0.
double DuBiasBound(const CardinalUtility& w, const GameSpec& game, int player,
                   double rho);

// 2 w_grand^2 ln(2I / delta); delta in (0, 1).
double McErrorAtBudget(double w_grand, int num_players, double delta);

struct BoundReport {
  std::vector<double> du_bound;  // per player
  double mc_error = 0.0;
  double rho = 0.0;
  bool crossing = false;  // player-averaged du_bound < mc_error

  double MeanDuBound() const;
};

// Evaluates both bounds on one instance, with w_grand = w(n_I) and rho from
// EstimateRho on `rho_grid`.
BoundReport ComputeBoundReport(const CardinalUtility& w, const GameSpec& game,
                               double delta, std::span<const double> rho_grid);

std::string ToJson(const BoundReport& report, int indent = 2);

}  // namespace dsval

#endif  // DSVAL_BOUNDS_H_
