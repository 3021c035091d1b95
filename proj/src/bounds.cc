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

#include "dsval/bounds.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dsval {

SizeStats ComputeSizeStats(const GameSpec& game, int player) {
  const int num_players = game.num_players();
  if (num_players < 2) {
    throw std::invalid_argument("size statistics need at least two players");
  }
  game.size(player);  // range check

  SizeStats stats;
  stats.n_excl_i = game.total() - game.size(player);
  stats.mu_minus_i =
      static_cast<double>(stats.n_excl_i) / static_cast<double>(num_players - 1);
  double squares = 0.0;
  for (int j = 0; j < num_players; ++j) {
    if (j == player) continue;
    const double gap = static_cast<double>(game.sizes()[j]) - stats.mu_minus_i;
    squares += gap * gap;
    stats.r_minus_i = std::max(stats.r_minus_i, std::abs(gap));
    stats.n_max_minus_i = std::max(stats.n_max_minus_i, game.sizes()[j]);
  }
  stats.sigma2_minus_i = squares / (num_players - 1);
  return stats;
}

std::vector<double> LogGrid(double lo, double hi, int points) {
  if (!(lo > 0.0) || hi < lo || points < 1) {
    throw std::invalid_argument("LogGrid needs 0 < lo <= hi and points >= 1");
  }
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int p = 0; p < points; ++p) grid[p] = lo * std::exp(step * p);
  grid.back() = hi;
  return grid;
}

double SecondDerivative(const CardinalUtility& w, double n) {
  if (!(n > 0.0)) {
    throw std::invalid_argument("second difference needs n > 0");
  }
  const double h = std::min(std::max(1e-3 * n, 1e-3), n);
  return (w(n + h) - 2.0 * w(n) + w(n - h)) / (h * h);
}

double EstimateRho(const CardinalUtility& w, std::span<const double> grid) {
  double rho = 0.0;
  bool any = false;
  for (double n : grid) {
    if (!(n > 0.0)) throw std::invalid_argument("rho grid points must be > 0");
    const double value = w(n);
    if (value == 0.0) continue;
    any = true;
    rho = std::max(rho, n * n * std::abs(SecondDerivative(w, n)) /
                            std::abs(value));
  }
  if (!any) {
    throw std::invalid_argument("w vanishes on every rho grid point");
  }
  return rho;
}

double DuBiasBound(const CardinalUtility& w, const GameSpec& game, int player,
                   double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  const SizeStats s = ComputeSizeStats(game, player);
  if (s.mu_minus_i == 0.0) {
    throw std::invalid_argument("bias bound undefined: other players are empty");
  }
  const double others = game.num_players() - 1;
  const double prefactor = rho * std::abs(w(static_cast<double>(s.n_excl_i))) /
                           (others * s.mu_minus_i * s.mu_minus_i);
  return prefactor *
         (9.0 * s.sigma2_minus_i * (1.0 + std::log(others)) +
          2.0 * s.r_minus_i * s.r_minus_i * static_cast<double>(s.n_max_minus_i));
}

double McErrorAtBudget(double w_grand, int num_players, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (num_players < 1) throw std::invalid_argument("need at least one player");
  return 2.0 * w_grand * w_grand * std::log(2.0 * num_players / delta);
}

double BoundReport::MeanDuBound() const {
  if (du_bound.empty()) return 0.0;
  return std::accumulate(du_bound.begin(), du_bound.end(), 0.0) /
         static_cast<double>(du_bound.size());
}

BoundReport ComputeBoundReport(const CardinalUtility& w, const GameSpec& game,
                               double delta, std::span<const double> rho_grid) {
  BoundReport report;
  report.rho = EstimateRho(w, rho_grid);
  for (int i = 0; i < game.num_players(); ++i) {
    report.du_bound.push_back(DuBiasBound(w, game, i, report.rho));
  }
  report.mc_error = McErrorAtBudget(w(static_cast<double>(game.total())),
                                    game.num_players(), delta);
  report.crossing = report.MeanDuBound() < report.mc_error;
  return report;
}

std::string ToJson(const BoundReport& report, int indent) {
  nlohmann::ordered_json j;
  j["du_bound"] = report.du_bound;
  j["du_bound_mean"] = report.MeanDuBound();
  j["mc_error"] = report.mc_error;
  j["rho"] = report.rho;
  j["crossing"] = report.crossing;
  return j.dump(indent);
}

}  // namespace dsval
