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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dsval/bounds.h"
#include "dsval/exact.h"
#include "dsval/parallel.h"
#include "dsval/rng.h"

namespace dsval {
namespace {

int64_t ParseInt(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int64_t value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("bad " + what + ": '" + text + "'");
  }
  return value;
}

double MeanSquaredError(const std::vector<double>& estimate,
                        const std::vector<double>& exact) {
  double total = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double e = estimate[i] - exact[i];
    total += e * e;
  }
  return total / static_cast<double>(exact.size());
}

void CheckAgainstPermutationForm(const SetUtility& u, const GameSpec& game,
                                 const std::vector<double>& exact) {
  const auto perm = ExactShapleyPermutations(u, game).values;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (std::abs(perm[i] - exact[i]) > 1e-12 * std::max(1.0, std::abs(exact[i]))) {
      throw std::runtime_error("exact reference disagrees across forms for player " +
                               std::to_string(i));
    }
  }
}

}  // namespace

SizeDistribution SizeDistribution::Parse(const std::string& spec) {
  SizeDistribution dist;
  if (spec == "pow2") {
    dist.kind = Kind::kPowersOfTwo;
    return dist;
  }
  if (spec.rfind("uniform:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("expected uniform:lo:hi, got '" + spec + "'");
    }
    dist.kind = Kind::kUniformRange;
    dist.lo = ParseInt(rest.substr(0, colon), "lower bound");
    dist.hi = ParseInt(rest.substr(colon + 1), "upper bound");
    if (dist.lo < 0 || dist.hi < dist.lo) {
      throw std::invalid_argument("uniform range needs 0 <= lo <= hi");
    }
    return dist;
  }
  if (spec.rfind("explicit:", 0) == 0) {
    dist.kind = Kind::kExplicit;
    dist.sizes = GameSpec::Parse(spec.substr(9)).sizes();
    return dist;
  }
  throw std::invalid_argument("unknown size distribution '" + spec +
                              "' (uniform:lo:hi, pow2, explicit:a,b,...)");
}

std::string SizeDistribution::ToString() const {
  switch (kind) {
    case Kind::kUniformRange:
      return "uniform:" + std::to_string(lo) + ":" + std::to_string(hi);
    case Kind::kPowersOfTwo:
      return "pow2";
    case Kind::kExplicit: {
      std::string out = "explicit:";
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sizes[i]);
      }
      return out;
    }
  }
  return "";
}

GameSpec SizeDistribution::Draw(int num_players, uint64_t seed) const {
  if (num_players < 1) throw std::invalid_argument("need at least one player");
  std::vector<int64_t> sizes(num_players);
  switch (kind) {
    case Kind::kUniformRange: {
      Rng rng(seed, {kTagSizes});
      for (auto& n : sizes) {
        n = lo + static_cast<int64_t>(rng.Below(static_cast<uint64_t>(hi - lo) + 1));
      }
      break;
    }
    case Kind::kPowersOfTwo:
      if (num_players > 52) {
        throw std::invalid_argument("pow2 sizes overflow beyond 52 players");
      }
      for (int i = 0; i < num_players; ++i) sizes[i] = int64_t{1} << (i + 1);
      break;
    case Kind::kExplicit:
      if (static_cast<int>(this->sizes.size()) != num_players) {
        throw std::invalid_argument("explicit sizes list has " +
                                    std::to_string(this->sizes.size()) +
                                    " entries, expected " +
                                    std::to_string(num_players));
      }
      sizes = this->sizes;
      break;
  }
  return GameSpec(std::move(sizes));
}

void ComparisonConfig::Validate() const {
  if (num_players < 1) throw std::invalid_argument("I must be >= 1");
  if (methods.empty()) throw std::invalid_argument("no methods selected");
  if (budget_terms < 1) throw std::invalid_argument("budget must be >= 1");
  if (estimations_per_mse < 2) {
    throw std::invalid_argument("estimations_per_mse must be >= 2");
  }
  if (mse_repetitions < 2) {
    throw std::invalid_argument("mse_repetitions must be >= 2");
  }
  for (Method m : methods) {
    if (m == Method::kAntithetic && budget_terms % 2 != 0) {
      throw std::invalid_argument("mc-anti needs an even budget");
    }
  }
}

std::vector<double> MseTable::Series(Method method) const {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.method == method) out.push_back(row.mse);
  }
  return out;
}

ComparisonGame MakeCardinalComparisonGame(const CardinalUtility& w,
                                          const GameSpec& game) {
  const CardinalUtility normalized = NormalizeUtility(w);
  ComparisonGame result{game, CardinalToSetUtility(normalized, game), nullptr,
                        false};
  result.du_estimate = [normalized, game](Method method, uint64_t) {
    return method == Method::kDuPlusPlus ? DuShapleyPlusPlus(normalized, game)
                                         : DuShapley(normalized, game);
  };
  return result;
}

ComparisonGame MakeEmpiricalComparisonGame(
    std::shared_ptr<const TabularDataset> data, const Partition& partition,
    ModelKind kind, uint64_t seed, const ProxyOptions& options) {
  std::vector<int64_t> sizes;
  for (const auto& rows : partition.player_rows) {
    sizes.push_back(static_cast<int64_t>(rows.size()));
  }
  GameSpec spec(std::move(sizes));
  SetUtility u = MakeEmpiricalSetUtility(data, partition, kind, seed, options.training);
  ComparisonGame result{spec, u, nullptr, true};
  result.du_estimate = [=](Method method, uint64_t proxy_seed) {
    std::vector<CardinalProxy> proxies;
    for (int i = 0; i < spec.num_players(); ++i) {
      proxies.push_back(
          MakeEmpiricalCardinalProxy(data, partition, i, kind, proxy_seed, options)
              .proxy);
    }
    return method == Method::kDuPlusPlus
               ? DuShapleyPlusPlusWithProxies(proxies, u, spec)
               : DuShapleyWithProxies(proxies, spec);
  };
  return result;
}

MseTable RunComparison(const ComparisonConfig& config,
                       const ComparisonGame& game) {
  config.Validate();
  const int num_players = game.spec.num_players();
  if (num_players != config.num_players) {
    throw std::invalid_argument("config and game disagree on I");
  }

  MseTable table;
  table.exact = ExactShapleySubsets(game.utility, game.spec).values;
  if (num_players <= 8) {
    CheckAgainstPermutationForm(game.utility, game.spec, table.exact);
  }

  // One task per (method, block, estimation); deterministic methods use a
  // single estimation per block.
  struct Task {
    std::size_t method_index;
    int block;
    int estimation;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    const int runs = IsStochastic(method) ? config.estimations_per_mse : 1;
    for (int b = 0; b < config.mse_repetitions; ++b) {
      for (int e = 0; e < runs; ++e) tasks.push_back({m, b, e});
    }
  }

  std::vector<double> errors(tasks.size());
  std::vector<int64_t> budgets(tasks.size());
  ParallelFor(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const Method method = config.methods[task.method_index];
    const uint64_t seed = DeriveSeed(
        config.master_seed,
        {kTagBench, static_cast<uint64_t>(method),
         static_cast<uint64_t>(task.block), static_cast<uint64_t>(task.estimation)});
    ValuationVector v;
    if (method == Method::kExact) {
      v = ExactShapleySubsets(game.utility, game.spec);
    } else if (method == Method::kDu || method == Method::kDuPlusPlus) {
      v = game.du_estimate(method, seed);
    } else {
      const SetUtility u = game.utility.WithFreshCounter();
      v = Estimate(u, nullptr, game.spec, {method, config.budget_terms, seed});
      const uint64_t expected =
          2 * static_cast<uint64_t>(config.budget_terms) * num_players;
      if (u.eval_count() != expected) {
        throw std::logic_error(std::string(MethodName(method)) + " used " +
                               std::to_string(u.eval_count()) +
                               " utility calls, expected " +
                               std::to_string(expected));
      }
    }
    errors[t] = MeanSquaredError(v.values, table.exact);
    budgets[t] = v.budget_used;
  });

  // Sequential reduction in task order.
  std::size_t t = 0;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    MseSummary summary{method, budgets[t], 0.0, 0.0, 0.0};
    for (int b = 0; b < config.mse_repetitions; ++b) {
      double total = 0.0;
      int runs = 0;
      for (; t < tasks.size() && tasks[t].method_index == m && tasks[t].block == b;
           ++t, ++runs) {
        total += errors[t];
      }
      const double mse = total / runs;
      table.rows.push_back({method, summary.budget, b, mse});
      summary.mean += mse;
      summary.min = b == 0 ? mse : std::min(summary.min, mse);
      summary.max = b == 0 ? mse : std::max(summary.max, mse);
    }
    summary.mean /= config.mse_repetitions;
    table.summaries.push_back(summary);
  }
  return table;
}

double KsDistanceToUniform(std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = std::clamp(values[k], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(k) + 1.0) / n - x,
                  x - static_cast<double>(k) / n});
  }
  return d;
}

ConvergenceResult ConvergenceExperiment(const GameSpec& game, int64_t samples,
                                        uint64_t seed) {
  const int num_players = game.num_players();
  if (num_players < 2) throw std::invalid_argument("convergence needs I >= 2");
  if (samples < 1000) throw std::invalid_argument("samples must be >= 1000");
  const int others = num_players - 1;
  const int64_t n_excl = game.total() - game.size(others);
  if (n_excl <= 0) {
    throw std::invalid_argument("the other players hold no data");
  }

  std::vector<double> values(samples);
  constexpr int64_t kChunk = 4096;
  const auto chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  ParallelFor(chunks, [&](std::size_t c) {
    std::vector<int> order(others);
    const int64_t end = std::min<int64_t>(samples, (c + 1) * kChunk);
    for (int64_t s = c * kChunk; s < end; ++s) {
      Rng rng(seed, {kTagConvergence, static_cast<uint64_t>(s)});
      const int k = static_cast<int>(rng.Below(num_players));
      for (int j = 0; j < others; ++j) order[j] = j;
      int64_t total = 0;
      for (int j = 0; j < k; ++j) {
        std::swap(order[j], order[j + rng.Below(others - j)]);
        total += game.size(order[j]);
      }
      values[s] = static_cast<double>(total) / static_cast<double>(n_excl);
    }
  });

  ConvergenceResult result;
  result.num_players = num_players;
  result.samples = samples;
  constexpr int kBins = 50;
  result.histogram.assign(kBins, 0.0);
  for (double v : values) {
    const int bin = std::min(kBins - 1, static_cast<int>(v * kBins));
    result.histogram[bin] += 1.0;
  }
  for (double& h : result.histogram) h *= kBins / static_cast<double>(samples);
  result.ks = KsDistanceToUniform(values);
  return result;
}

CardinalUtility SaturatingUtility(double k) {
  const double scale = std::pow(10.0, k);
  return CardinalUtility([scale](double n) { return n / (scale + n); });
}

double SaturationExponent(int64_t n_total) {
  if (n_total < 1) throw std::invalid_argument("n_I must be >= 1");
  int digits = 0;
  for (int64_t v = n_total; v >= 10; v /= 10) ++digits;
  return digits - 1;
}

std::vector<BoundsRow> BoundsExperiment(const BoundsExperimentConfig& config,
                                        bool per_draw) {
  if (config.grid.empty()) throw std::invalid_argument("empty I grid");
  if (config.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (config.draws < 1) throw std::invalid_argument("draws must be >= 1");
  for (int I : config.grid) {
    if (I < 2) throw std::invalid_argument("every I in the grid must be >= 2");
  }
  const SizeDistribution dist{SizeDistribution::Kind::kUniformRange, 1,
                              config.n_max, {}};

  struct Slot {
    double du = 0.0;
    double mc = 0.0;
  };
  std::vector<Slot> slots(config.grid.size() * config.draws);
  ParallelFor(slots.size(), [&](std::size_t s) {
    const int I = config.grid[s / config.draws];
    const int draw = static_cast<int>(s % config.draws);
    const GameSpec game = dist.Draw(
        I, DeriveSeed(config.seed, {kTagBench, static_cast<uint64_t>(I),
                                    static_cast<uint64_t>(draw)}));
    const CardinalUtility w = SaturatingUtility(SaturationExponent(game.total()));
    const auto grid = LogGrid(1.0, static_cast<double>(game.total()),
                              config.rho_grid_points);
    const BoundReport report = ComputeBoundReport(w, game, config.delta, grid);
    slots[s] = {report.MeanDuBound(), report.mc_error};
  });

  std::vector<BoundsRow> rows;
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    BoundsRow mean{config.grid[g], -1, 0.0, 0.0};
    for (int d = 0; d < config.draws; ++d) {
      const Slot& slot = slots[g * config.draws + d];
      if (per_draw) rows.push_back({config.grid[g], d, slot.du, slot.mc});
      mean.du_bound_mean += slot.du;
      mean.mc_error += slot.mc;
    }
    if (!per_draw) {
      mean.du_bound_mean /= config.draws;
      mean.mc_error /= config.draws;
      rows.push_back(mean);
    }
  }
  return rows;
}

}  // namespace dsval
