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

#include "dsval/estimators.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "dsval/exact.h"
#include "dsval/parallel.h"
#include "dsval/rng.h"

namespace dsval {
namespace {

void CheckSampling(const GameSpec& game, const EstimatorConfig& config) {
  if (config.budget_terms < 1) {
    throw std::invalid_argument("budget_terms must be >= 1");
  }
  if (game.num_players() > Coalition::kMaxPlayers) {
    throw std::invalid_argument("sampling estimators support at most 64 players");
  }
}

// Fisher-Yates shuffle of `order` in place.
void Shuffle(std::vector<int>& order, Rng& rng) {
  for (std::size_t j = order.size(); j > 1; --j) {
    std::swap(order[j - 1], order[rng.Below(j)]);
  }
}

// Members placed before `player` in `order`.
uint64_t Predecessors(const std::vector<int>& order, int player) {
  uint64_t mask = 0;
  for (int p : order) {
    if (p == player) break;
    mask |= uint64_t{1} << p;
  }
  return mask;
}

double Marginal(const SetUtility& u, int num_players, uint64_t coalition,
                int player) {
  const Coalition without(num_players, coalition);
  return u(without.Insert(player)) - u(without);
}

ValuationVector MakeResult(Method method, int num_players, int64_t budget,
                           std::optional<uint64_t> seed) {
  ValuationVector v;
  v.method = std::string(MethodName(method));
  v.values.assign(num_players, 0.0);
  v.budget_used = budget;
  v.seed = seed;
  return v;
}

// Shared body of the DU variants: values[i] = (1/I) sum_k term(i, k).
template <typename Term>
ValuationVector DuLayers(Method method, const GameSpec& game, Term term) {
  const int num_players = game.num_players();
  ValuationVector result =
      MakeResult(method, num_players, num_players, std::nullopt);
  ParallelFor(num_players, [&](std::size_t i) {
    double total = 0.0;
    for (int k = 0; k < num_players; ++k) total += term(static_cast<int>(i), k);
    result.values[i] = total / num_players;
  });
  return result;
}

void CheckProxies(std::span<const CardinalProxy> proxies, const GameSpec& game) {
  if (static_cast<int>(proxies.size()) != game.num_players()) {
    throw std::invalid_argument("need one cardinal proxy per player");
  }
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kExact: return "exact";
    case Method::kMonteCarlo: return "mc";
    case Method::kAntithetic: return "mc-anti";
    case Method::kOwen: return "owen";
    case Method::kDu: return "du";
    case Method::kDuPlusPlus: return "dupp";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kExact, Method::kMonteCarlo, Method::kAntithetic,
                   Method::kOwen, Method::kDu, Method::kDuPlusPlus}) {
    if (MethodName(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected exact, mc, mc-anti, owen, du, dupp)");
}

bool IsStochastic(Method method) {
  return method == Method::kMonteCarlo || method == Method::kAntithetic ||
         method == Method::kOwen;
}

ValuationVector McShapley(const SetUtility& u, const GameSpec& game,
                          const EstimatorConfig& config) {
  CheckSampling(game, config);
  const int num_players = game.num_players();
  ValuationVector result = MakeResult(Method::kMonteCarlo, num_players,
                                      config.budget_terms, config.seed);
  ParallelFor(num_players, [&](std::size_t i) {
    const int player = static_cast<int>(i);
    std::vector<int> order(num_players);
    double total = 0.0;
    for (int64_t t = 0; t < config.budget_terms; ++t) {
      Rng rng(config.seed, {kTagMonteCarlo, i, static_cast<uint64_t>(t)});
      std::iota(order.begin(), order.end(), 0);
      Shuffle(order, rng);
      total += Marginal(u, num_players, Predecessors(order, player), player);
    }
    result.values[i] = total / static_cast<double>(config.budget_terms);
  });
  return result;
}

ValuationVector McAntitheticShapley(const SetUtility& u, const GameSpec& game,
                                    const EstimatorConfig& config) {
  CheckSampling(game, config);
  if (config.budget_terms % 2 != 0) {
    throw std::invalid_argument("antithetic sampling needs an even budget");
  }
  const int num_players = game.num_players();
  const uint64_t others = FullMask(num_players);
  ValuationVector result = MakeResult(Method::kAntithetic, num_players,
                                      config.budget_terms, config.seed);
  ParallelFor(num_players, [&](std::size_t i) {
    const int player = static_cast<int>(i);
    const uint64_t rest = others & ~(uint64_t{1} << player);
    std::vector<int> order(num_players);
    double total = 0.0;
    for (int64_t p = 0; p < config.budget_terms / 2; ++p) {
      Rng rng(config.seed, {kTagAntithetic, i, static_cast<uint64_t>(p)});
      std::iota(order.begin(), order.end(), 0);
      Shuffle(order, rng);
      const uint64_t before = Predecessors(order, player);
      // In the reversed ordering the predecessors are the successors.
      total += Marginal(u, num_players, before, player);
      total += Marginal(u, num_players, rest & ~before, player);
    }
    result.values[i] = total / static_cast<double>(config.budget_terms);
  });
  return result;
}

ValuationVector OwenShapley(const SetUtility& u, const GameSpec& game,
                            const EstimatorConfig& config) {
  CheckSampling(game, config);
  const int num_players = game.num_players();
  ValuationVector result =
      MakeResult(Method::kOwen, num_players, config.budget_terms, config.seed);
  ParallelFor(num_players, [&](std::size_t i) {
    const int player = static_cast<int>(i);
    double total = 0.0;
    for (int64_t t = 0; t < config.budget_terms; ++t) {
      Rng rng(config.seed, {kTagOwen, i, static_cast<uint64_t>(t)});
      const double tau = rng.Uniform();
      uint64_t coalition = 0;
      for (int j = 0; j < num_players; ++j) {
        if (j != player && rng.Uniform() < tau) coalition |= uint64_t{1} << j;
      }
      total += Marginal(u, num_players, coalition, player);
    }
    result.values[i] = total / static_cast<double>(config.budget_terms);
  });
  return result;
}

double DuGridPoint(const GameSpec& game, int player, int k) {
  const int num_players = game.num_players();
  if (num_players < 2) {
    throw std::invalid_argument("the DU grid needs at least two players");
  }
  const double excluded =
      static_cast<double>(game.total() - game.size(player));
  return static_cast<double>(k) * excluded / (num_players - 1);
}

ValuationVector DuShapley(const CardinalUtility& w, const GameSpec& game) {
  if (game.num_players() == 1) {
    return DuLayers(Method::kDu, game, [&](int, int) {
      return w(static_cast<double>(game.size(0))) - w(0.0);
    });
  }
  return DuLayers(Method::kDu, game, [&](int i, int k) {
    const double x = DuGridPoint(game, i, k);
    return w(x + static_cast<double>(game.size(i))) - w(x);
  });
}

ValuationVector DuShapleyPlusPlus(const CardinalUtility& w,
                                  const GameSpec& game) {
  const int last = game.num_players() - 1;
  const auto total = static_cast<double>(game.total());
  return DuLayers(Method::kDuPlusPlus, game, [&](int i, int k) {
    const auto own = static_cast<double>(game.size(i));
    if (k == 0) return w(own) - w(0.0);
    if (k == last) return w(total) - w(total - own);
    const double x = DuGridPoint(game, i, k);
    return w(x + own) - w(x);
  });
}

ValuationVector DuShapleyWithProxies(std::span<const CardinalProxy> proxies,
                                     const GameSpec& game) {
  CheckProxies(proxies, game);
  return DuLayers(Method::kDu, game, [&](int i, int k) {
    const double x = game.num_players() == 1 ? 0.0 : DuGridPoint(game, i, k);
    return proxies[i].with_player(x + static_cast<double>(game.size(i))) -
           proxies[i].pool(x);
  });
}

ValuationVector DuShapleyPlusPlusWithProxies(
    std::span<const CardinalProxy> proxies, const SetUtility& u,
    const GameSpec& game) {
  CheckProxies(proxies, game);
  const int num_players = game.num_players();
  const int last = num_players - 1;
  const Coalition empty = Coalition::Empty(num_players);
  const Coalition grand = Coalition::Grand(num_players);
  return DuLayers(Method::kDuPlusPlus, game, [&](int i, int k) {
    if (k == 0) return u(empty.Insert(i)) - u(empty);
    if (k == last) return u(grand) - u(grand.Remove(i));
    const double x = DuGridPoint(game, i, k);
    return proxies[i].with_player(x + static_cast<double>(game.size(i))) -
           proxies[i].pool(x);
  });
}

int64_t TPerm(double epsilon, double delta, double range, int num_players) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(range > 0.0)) throw std::invalid_argument("range must be > 0");
  if (num_players < 1) throw std::invalid_argument("need at least one player");
  const double players = num_players;
  return static_cast<int64_t>(std::ceil(2.0 * range * range * players /
                                        (epsilon * epsilon) *
                                        std::log(2.0 * players / delta)));
}

ValuationVector Estimate(const SetUtility& u, const CardinalUtility* w,
                         const GameSpec& game, const EstimatorConfig& config) {
  switch (config.method) {
    case Method::kExact:
      return ExactShapleySubsets(u, game);
    case Method::kMonteCarlo:
      return McShapley(u, game, config);
    case Method::kAntithetic:
      return McAntitheticShapley(u, game, config);
    case Method::kOwen:
      return OwenShapley(u, game, config);
    case Method::kDu:
    case Method::kDuPlusPlus:
      if (w == nullptr) {
        throw std::invalid_argument("DU estimators need a cardinal utility");
      }
      return config.method == Method::kDu ? DuShapley(*w, game)
                                          : DuShapleyPlusPlus(*w, game);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace dsval
