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

// Shapley value approximations: permutation Monte Carlo (plain and
// antithetic), Owen's multilinear sampling, and the discrete-uniform
// estimators DU and DU++.
//
// Budget unit: one term is one marginal difference u(S+i) - u(S). The
// sampling estimators spend T terms per player; DU and DU++ spend I.
// Every player gets its own substreams derived from the seed, so outputs do
// not depend on the number of worker threads.

#ifndef DSVAL_ESTIMATORS_H_
#define DSVAL_ESTIMATORS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsval/game.h"

namespace dsval {

enum class Method { kExact, kMonteCarlo, kAntithetic, kOwen, kDu, kDuPlusPlus };

// CLI names: exact, mc, mc-anti, owen, du, dupp.
std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
bool IsStochastic(Method method);

struct EstimatorConfig {
  Method method = Method::kMonteCarlo;
  int64_t budget_terms = 1;  // T per player; ignored by DU and DU++
  uint64_t seed = 0;
};

ValuationVector McShapley(const SetUtility& u, const GameSpec& game,
                          const EstimatorConfig& config);

// T/2 permutations, each paired with its reversal. T must be even.
ValuationVector McAntitheticShapley(const SetUtility& u, const GameSpec& game,
                                    const EstimatorConfig& config);

// One coalition per draw: tau ~ U[0,1], then every other player joins
// independently with probability tau.
ValuationVector OwenShapley(const SetUtility& u, const GameSpec& game,
                            const EstimatorConfig& config);

// k * mu_{-i} computed as k * n_{I\{i}} / (I - 1), so the last grid point
// equals n_{I\{i}} exactly. Requires I >= 2.
double DuGridPoint(const GameSpec& game, int player, int k);

// psi_i = (1/I) sum_{k=0}^{I-1} [w(k mu_{-i} + n_i) - w(k mu_{-i})].
ValuationVector DuShapley(const CardinalUtility& w, const GameSpec& game);

// DU with the k = 0 and k = I-1 layers replaced by their exact values,
// w(n_i) - w(0) and w(n_I) - w(n_{I\{i}}). Up to rounding this coincides
// with DuShapley for any cardinal w, because the grid already hits both end
// points; the two differ once the end layers come from a set utility (see
// DuShapleyPlusPlusWithProxies).
ValuationVector DuShapleyPlusPlus(const CardinalUtility& w,
                                  const GameSpec& game);

// Stand-ins for w when player i's marginal cannot be read off a single
// cardinal function (empirical games). `pool` is evaluated at an aggregate
// size drawn from the other players; `with_player` at that size plus n_i,
// with player i's own data included.
struct CardinalProxy {
  CardinalUtility pool;
  CardinalUtility with_player;
};

// DU with per-player proxies: term k is
// with_player(k mu_{-i} + n_i) - pool(k mu_{-i}).
ValuationVector DuShapleyWithProxies(std::span<const CardinalProxy> proxies,
                                     const GameSpec& game);

// DU++ with per-player proxies for the middle layers and the set utility u
// for the end layers: u({i}) - u(empty) and u(I) - u(I\{i}).
ValuationVector DuShapleyPlusPlusWithProxies(
    std::span<const CardinalProxy> proxies, const SetUtility& u,
    const GameSpec& game);

// Permutation count for an (epsilon, delta) guarantee:
// ceil((2 r_u^2 I / epsilon^2) ln(2I / delta)).
int64_t TPerm(double epsilon, double delta, double range, int num_players);

// Runs the configured method. DU and DU++ need `w`; kExact uses the subset
// form.
ValuationVector Estimate(const SetUtility& u, const CardinalUtility* w,
                         const GameSpec& game, const EstimatorConfig& config);

}  // namespace dsval

#endif  // DSVAL_ESTIMATORS_H_
