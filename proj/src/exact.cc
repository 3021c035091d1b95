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

#include "dsval/exact.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dsval/parallel.h"

namespace dsval {
namespace {

void CheckCap(int num_players, int cap, const char* form) {
  if (num_players > cap) {
    std::ostringstream msg;
    msg << "exact " << form << " form is limited to " << cap
        << " players (got " << num_players << ")";
    throw std::invalid_argument(msg.str());
  }
}

uint64_t Factorial(int n) {
  uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<uint64_t>(k);
  return f;
}

}  // namespace

uint64_t Binomial(int n, int k) {
  if (n < 0 || n > 62) throw std::invalid_argument("Binomial: n out of range");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  // Each partial product is C(n-k+j, j), so the division is exact.
  for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return static_cast<uint64_t>(result);
}

std::vector<double> TabulateUtility(const SetUtility& u, int num_players) {
  const std::size_t count = std::size_t{1} << num_players;
  std::vector<double> table(count);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  ParallelFor(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < end; ++m) {
      table[m] = u(Coalition(num_players, m));
    }
  });
  return table;
}

ValuationVector ExactShapleySubsets(const SetUtility& u, const GameSpec& game,
                                    const ExactConfig& config) {
  const int num_players = game.num_players();
  CheckCap(num_players, config.max_players_subsets, "subset");
  const std::vector<double> table = TabulateUtility(u, num_players);

  std::vector<double> inverse_binomial(num_players);
  for (int k = 0; k < num_players; ++k) {
    inverse_binomial[k] = 1.0 / static_cast<double>(Binomial(num_players - 1, k));
  }

  ValuationVector result;
  result.method = "exact";
  result.values.assign(num_players, 0.0);
  result.budget_used = int64_t{1} << (num_players - 1);

  const uint64_t count = uint64_t{1} << num_players;
  ParallelFor(num_players, [&](std::size_t i) {
    const uint64_t bit = uint64_t{1} << i;
    // Marginals grouped by |S| so each layer gets one weight.
    std::vector<long double> layer(num_players, 0.0L);
    for (uint64_t s = 0; s < count; ++s) {
      if (s & bit) continue;
      layer[std::popcount(s)] +=
          static_cast<long double>(table[s | bit]) - table[s];
    }
    long double total = 0.0L;
    for (int k = 0; k < num_players; ++k) total += layer[k] * inverse_binomial[k];
    result.values[i] = static_cast<double>(total / num_players);
  });
  return result;
}

ValuationVector ExactShapleyPermutations(const SetUtility& u,
                                         const GameSpec& game,
                                         const ExactConfig& config) {
  const int num_players = game.num_players();
  CheckCap(num_players, config.max_players_permutations, "permutation");
  const std::vector<double> table = TabulateUtility(u, num_players);

  // Permutations are split by their first player; each block walks the
  // remaining (I-1)! orderings in lexicographic order.
  std::vector<std::vector<long double>> partial(
      num_players, std::vector<long double>(num_players, 0.0L));
  ParallelFor(num_players, [&](std::size_t first) {
    std::vector<int> order(num_players);
    std::iota(order.begin(), order.end(), 0);
    std::rotate(order.begin(), order.begin() + first, order.begin() + first + 1);
    auto& sums = partial[first];
    do {
      uint64_t predecessors = 0;
      for (int player : order) {
        const uint64_t with = predecessors | (uint64_t{1} << player);
        sums[player] += static_cast<long double>(table[with]) - table[predecessors];
        predecessors = with;
      }
    } while (std::next_permutation(order.begin() + 1, order.end()));
  });

  ValuationVector result;
  result.method = "exact";
  result.values.assign(num_players, 0.0);
  const uint64_t orderings = Factorial(num_players);
  result.budget_used = static_cast<int64_t>(orderings);
  for (int i = 0; i < num_players; ++i) {
    long double total = 0.0L;
    for (int first = 0; first < num_players; ++first) total += partial[first][i];
    result.values[i] = static_cast<double>(total / orderings);
  }
  return result;
}

ValuationVector ExactShapley(const SetUtility& u, const GameSpec& game,
                             const ExactConfig& config) {
  return config.form == ExactForm::kSubsets
             ? ExactShapleySubsets(u, game, config)
             : ExactShapleyPermutations(u, game, config);
}

bool AxiomReport::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::Get(const std::string& axiom) const {
  for (const auto& c : checks) {
    if (c.axiom == axiom) return c;
  }
  throw std::out_of_range("no axiom check named " + axiom);
}

AxiomReport CheckAxioms(const SetUtility& u, const GameSpec& game,
                        const ValuationVector& phi, double tol,
                        const SetUtility* second) {
  const int num_players = game.num_players();
  if (static_cast<int>(phi.values.size()) != num_players) {
    throw std::invalid_argument("valuation length differs from I");
  }
  constexpr int kMaxDetectPlayers = 15;
  AxiomReport report;

  {
    AxiomCheck c;
    c.axiom = "efficiency";
    const double grand = u(Coalition::Grand(num_players));
    long double sum = 0.0L;
    for (double v : phi.values) sum += v;
    c.worst_gap = std::abs(static_cast<double>(sum) - grand);
    c.passed = c.worst_gap <= tol;
    report.checks.push_back(c);
  }

  AxiomCheck dummy;
  dummy.axiom = "dummy";
  AxiomCheck symmetry;
  symmetry.axiom = "symmetry";
  if (num_players > kMaxDetectPlayers) {
    dummy.applicable = symmetry.applicable = false;
    dummy.detail = symmetry.detail = "skipped: I > 15";
  } else {
    const std::vector<double> table = TabulateUtility(u, num_players);
    const uint64_t count = uint64_t{1} << num_players;
    int dummies = 0;
    for (int i = 0; i < num_players; ++i) {
      const uint64_t bit = uint64_t{1} << i;
      bool is_dummy = true;
      for (uint64_t s = 0; s < count && is_dummy; ++s) {
        if (!(s & bit)) is_dummy = table[s | bit] == table[s];
      }
      if (!is_dummy) continue;
      ++dummies;
      dummy.worst_gap = std::max(dummy.worst_gap, std::abs(phi.values[i]));
      dummy.detail += (dummy.detail.empty() ? "" : ",") + std::to_string(i);
    }
    dummy.applicable = dummies > 0;
    dummy.passed = dummy.worst_gap <= tol;

    int pairs = 0;
    for (int i = 0; i < num_players; ++i) {
      for (int j = i + 1; j < num_players; ++j) {
        const uint64_t bi = uint64_t{1} << i;
        const uint64_t bj = uint64_t{1} << j;
        bool symmetric = true;
        for (uint64_t s = 0; s < count && symmetric; ++s) {
          if (s & (bi | bj)) continue;
          symmetric = table[s | bi] == table[s | bj];
        }
        if (!symmetric) continue;
        ++pairs;
        symmetry.worst_gap = std::max(
            symmetry.worst_gap, std::abs(phi.values[i] - phi.values[j]));
      }
    }
    symmetry.applicable = pairs > 0;
    symmetry.passed = symmetry.worst_gap <= tol;
    symmetry.detail = std::to_string(pairs) + " symmetric pair(s)";
  }
  report.checks.push_back(dummy);
  report.checks.push_back(symmetry);

  AxiomCheck linearity;
  linearity.axiom = "linearity";
  if (second == nullptr) {
    linearity.applicable = false;
    linearity.detail = "no second utility given";
  } else {
    const auto other = ExactShapleySubsets(*second, game);
    const auto combined = ExactShapleySubsets(AddUtilities(u, *second), game);
    for (int i = 0; i < num_players; ++i) {
      linearity.worst_gap = std::max(
          linearity.worst_gap,
          std::abs(combined.values[i] - phi.values[i] - other.values[i]));
    }
    linearity.passed = linearity.worst_gap <= tol;
  }
  report.checks.push_back(linearity);
  return report;
}

}  // namespace dsval
