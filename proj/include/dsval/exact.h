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

// Ground-truth Shapley values by full enumeration.

#ifndef DSVAL_EXACT_H_
#define DSVAL_EXACT_H_

#include <string>
#include <vector>

#include "dsval/game.h"

namespace dsval {

enum class ExactForm { kSubsets, kPermutations };

struct ExactConfig {
  ExactForm form = ExactForm::kSubsets;
  // 2^I coalition values are tabulated, so memory is 8 * 2^I bytes.
  int max_players_subsets = 25;
  // I! permutations are walked.
  int max_players_permutations = 10;
};

// Evaluates u on all 2^I coalitions (index = mask). Evaluation is spread over
// the worker pool; the table is identical for every thread count.
std::vector<double> TabulateUtility(const SetUtility& u, int num_players);

// phi_i = (1/I) sum_{S subset of I\{i}} C(I-1,|S|)^{-1} [u(S+i) - u(S)].
// budget_used is 2^(I-1), the number of marginal terms per player.
// Throws std::invalid_argument above max_players_subsets.
ValuationVector ExactShapleySubsets(const SetUtility& u, const GameSpec& game,
                                    const ExactConfig& config = {});

// Average over all I! orderings of the marginal contribution of i to its
// predecessors. budget_used is I!.
// Throws std::invalid_argument above max_players_permutations.
ValuationVector ExactShapleyPermutations(const SetUtility& u,
                                         const GameSpec& game,
                                         const ExactConfig& config = {});

// Dispatches on config.form.
ValuationVector ExactShapley(const SetUtility& u, const GameSpec& game,
                             const ExactConfig& config = {});

// C(n, k) in exact 64-bit arithmetic; n <= 62.
uint64_t Binomial(int n, int k);

struct AxiomCheck {
  std::string axiom;  // "efficiency", "dummy", "symmetry", "linearity"
  bool passed = true;
  bool applicable = true;  // false when e.g. no dummy player exists
  double worst_gap = 0.0;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool AllPassed() const;
  const AxiomCheck& Get(const std::string& axiom) const;
};

// Checks phi (computed on u) against the four Shapley axioms at tolerance
// `tol`. Dummy players and symmetric pairs are detected by enumeration, so
// the check is limited to I <= 15. Linearity is checked only when `second`
// is given: phi(u + second) is compared with phi(u) + phi(second), each
// computed by the exact subset form.
AxiomReport CheckAxioms(const SetUtility& u, const GameSpec& game,
                        const ValuationVector& phi, double tol,
                        const SetUtility* second = nullptr);

}  // namespace dsval

#endif  // DSVAL_EXACT_H_
