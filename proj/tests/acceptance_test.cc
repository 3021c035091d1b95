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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dsval/bench.h"
#include "dsval/bounds.h"
#include "dsval/cli.h"
#include "dsval/empirical_game.h"
#include "dsval/estimators.h"
#include "dsval/exact.h"
#include "dsval/game.h"
#include "dsval/parallel.h"
#include "dsval/regression_game.h"
#include "dsval/rng.h"

namespace dsval {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c);
  return buffer;
}

CardinalUtility Sqrt() {
  return CardinalUtility([](double n) { return std::sqrt(n); });
}
CardinalUtility Square() {
  return CardinalUtility([](double n) { return n * n; });
}
CardinalUtility Regression(int d) {
  return ClosedFormUtility(RegressionGameParams::Make(d, 1.0));
}

GameSpec RandomGame(std::mt19937_64& rng, int lo_players, int hi_players) {
  std::uniform_int_distribution<int> players(lo_players, hi_players);
  std::uniform_int_distribution<int64_t> size(1, 100);
  std::vector<int64_t> sizes(players(rng));
  for (auto& n : sizes) n = size(rng);
  return GameSpec(sizes);
}

Outcome ExactFormEquivalence() {
  std::mt19937_64 rng(101);
  const CardinalUtility utilities[] = {Sqrt(), Square(), Regression(3)};
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    const GameSpec game = RandomGame(rng, 2, 8);
    const SetUtility u = CardinalToSetUtility(utilities[g % 3], game);
    const auto a = ExactShapleySubsets(u, game).values;
    const auto b = ExactShapleyPermutations(u, game).values;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    }
  }
  return {worst <= 1e-12, Fmt("worst scaled gap %.3g over 50 games", worst)};
}

Outcome AxiomSuite() {
  const GameSpec game({5, 5, 0, 12, 30});
  const SetUtility sqrt_u = CardinalToSetUtility(Sqrt(), game);
  const SetUtility square_u = CardinalToSetUtility(Square(), game);
  const SetUtility sum = AddUtilities(sqrt_u, square_u);
  const ValuationVector phi = ExactShapley(sum, game);
  const AxiomReport report = CheckAxioms(sum, game, phi, 1e-10, &sqrt_u);
  bool all_applicable = true;
  for (const auto& check : report.checks) all_applicable &= check.applicable;

  // A non-cardinal game: player 3 adds nothing, players 0 and 1 are
  // interchangeable.
  const GameSpec four({1, 1, 1, 1});
  const SetUtility table([](const Coalition& s) {
    const bool a = s.Contains(0), b = s.Contains(1), c = s.Contains(2);
    return (a && c ? 3.0 : 0.0) + (b && c ? 3.0 : 0.0) + (a || b ? 1.0 : 0.0);
  });
  const SetUtility doubled = ScaleUtility(table, 2.0);
  const AxiomReport second =
      CheckAxioms(table, four, ExactShapley(table, four), 1e-10, &doubled);
  for (const auto& check : second.checks) all_applicable &= check.applicable;

  const bool pass = report.AllPassed() && second.AllPassed() && all_applicable;
  return {pass, Fmt("efficiency gaps %.2g and %.2g", report.Get("efficiency").worst_gap,
                    second.Get("efficiency").worst_gap)};
}

Outcome DuHomogeneity() {
  double worst = 0.0;
  const CardinalUtility utilities[] = {Sqrt(), Regression(3)};
  for (int I = 2; I <= 12; ++I) {
    for (int64_t n : {1, 7, 50}) {
      for (const auto& w : utilities) {
        const GameSpec game(std::vector<int64_t>(I, n));
        const auto exact = ExactShapleySubsets(CardinalToSetUtility(w, game), game).values;
        const auto du = DuShapley(w, game).values;
        for (int i = 0; i < I; ++i) worst = std::max(worst, std::abs(du[i] - exact[i]));
      }
    }
  }
  return {worst <= 1e-12, Fmt("worst |psi - phi| %.3g", worst)};
}

Outcome BoundValidity() {
  std::mt19937_64 rng(404);
  const CardinalUtility utilities[] = {Sqrt(), Regression(3)};
  int violations = 0, checked = 0;
  double tightest = 0.0;
  for (int g = 0; g < 100; ++g) {
    const GameSpec game = RandomGame(rng, 3, 8);
    const CardinalUtility& w = utilities[g % 2];
    const double lo = static_cast<double>(
        *std::min_element(game.sizes().begin(), game.sizes().end()));
    const auto grid = LogGrid(lo, static_cast<double>(game.total()), 200);
    const double rho = EstimateRho(w, grid);
    const auto exact = ExactShapleySubsets(CardinalToSetUtility(w, game), game).values;
    const auto du = DuShapley(w, game).values;
    for (int i = 0; i < game.num_players(); ++i) {
      const double error = std::abs(exact[i] - du[i]);
      const double bound = DuBiasBound(w, game, i, rho);
      ++checked;
      if (error > bound) ++violations;
      if (bound > 0.0) tightest = std::max(tightest, error / bound);
    }
  }
  return {violations == 0, Fmt("%.0f violations over %.0f players, max error/bound %.3f",
                               violations, checked, tightest)};
}

Outcome ClosedFormOracle() {
  std::string detail;
  bool pass = true;
  for (auto [d, n] : {std::pair<int, int64_t>{5, 50}, {10, 100}, {10, 500}}) {
    const auto params = RegressionGameParams::Make(d, 1.0);
    const double closed = ClosedFormUtility(params)(static_cast<double>(n));
    OracleOptions options;
    options.seed = 1000 + static_cast<uint64_t>(n) + static_cast<uint64_t>(d);
    const double empirical = EmpiricalUtilityOracle(
        params, Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), n, options);
    const double rel = std::abs(empirical - closed) / std::abs(closed);
    pass &= rel <= 0.05;
    detail += Fmt("(d=%.0f,n=%.0f) rel %.4f ", d, static_cast<double>(n), rel);
  }
  return {pass, detail};
}

Outcome Unbiasedness() {
  const GameSpec game({1, 3, 7, 15, 40});
  const CardinalUtility w = Sqrt();
  const SetUtility u = CardinalToSetUtility(w, game);
  const auto exact = ExactShapleySubsets(u, game).values;
  constexpr int kRuns = 10000;
  double worst_z = 0.0;
  for (Method method : {Method::kMonteCarlo, Method::kAntithetic, Method::kOwen}) {
    std::vector<std::vector<double>> runs(kRuns);
    ParallelFor(kRuns, [&](std::size_t r) {
      runs[r] = Estimate(u, &w, game, {method, 4, DeriveSeed(606, {static_cast<uint64_t>(method), r})})
                    .values;
    });
    for (int i = 0; i < game.num_players(); ++i) {
      double mean = 0.0, sq = 0.0;
      for (const auto& v : runs) mean += v[i] / kRuns;
      for (const auto& v : runs) sq += (v[i] - mean) * (v[i] - mean);
      const double se = std::sqrt(sq / (kRuns - 1) / kRuns);
      worst_z = std::max(worst_z, std::abs(mean - exact[i]) / se);
    }
  }
  return {worst_z <= 4.0, Fmt("worst |mean - phi| / se = %.2f", worst_z)};
}

Outcome RegressionMseComparison() {
  ComparisonConfig config;
  config.num_players = 10;
  config.budget_terms = 10;
  config.master_seed = 77;
  config.methods = {Method::kMonteCarlo, Method::kDu, Method::kDuPlusPlus};
  const CardinalUtility w = Regression(10);
  const GameSpec uniform = SizeDistribution::Parse("uniform:10:1000").Draw(10, 77);
  const auto table = RunComparison(config, MakeCardinalComparisonGame(w, uniform));
  const auto mc = table.Series(Method::kMonteCarlo);
  const auto du = table.Series(Method::kDu);
  int du_wins = 0;
  for (std::size_t b = 0; b < mc.size(); ++b) du_wins += du[b] <= mc[b];

  config.methods = {Method::kDu, Method::kDuPlusPlus};
  const GameSpec pow2 = SizeDistribution::Parse("pow2").Draw(10, 77);
  const auto worst = RunComparison(config, MakeCardinalComparisonGame(w, pow2));
  const auto du2 = worst.Series(Method::kDu);
  const auto pp2 = worst.Series(Method::kDuPlusPlus);
  int pp_wins = 0;
  for (std::size_t b = 0; b < du2.size(); ++b) pp_wins += pp2[b] <= du2[b];
  return {du_wins >= 8 && pp_wins >= 8,
          Fmt("DU <= MC in %.0f/10, DU++ <= DU on 2^i in %.0f/10", du_wins, pp_wins)};
}

Outcome SizeConvergence() {
  const auto dist = SizeDistribution::Parse("uniform:1:100");
  const double small = ConvergenceExperiment(dist.Draw(10, 1), 100000, 2).ks;
  const double large = ConvergenceExperiment(dist.Draw(500, 1), 100000, 2).ks;
  return {small >= 3.0 * large, Fmt("KS %.4f at I=10, %.4f at I=500", small, large)};
}

Outcome BoundCrossing() {
  BoundsExperimentConfig config;
  config.grid = {3, 4, 5, 7, 10, 15, 20, 30, 50, 75, 100, 150, 200, 300, 500};
  config.n_max = 100;
  config.draws = 100;
  config.delta = 0.1;
  config.seed = 0;
  const auto rows = BoundsExperiment(config);
  // I* is the first grid point from which DU stays below MC to the end.
  int crossing = -1;
  for (int r = static_cast<int>(rows.size()) - 1; r >= 0; --r) {
    if (rows[r].du_bound_mean < rows[r].mc_error) {
      crossing = rows[r].num_players;
    } else {
      break;
    }
  }
  return {crossing > 0 && crossing <= 500, Fmt("I* = %.0f", crossing)};
}

Outcome ClassificationMseComparison() {
  const auto dir = std::filesystem::temp_directory_path() / "dsval_acceptance";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "synthetic.csv").string();
  const uint64_t seed = 7;
  WriteSyntheticClassificationCsv(path, 5000, seed);
  auto data = std::make_shared<const TabularDataset>(
      LoadCsv(path, "label", Task::kClassification));
  const GameSpec game = SizeDistribution::Parse("uniform:10:400").Draw(10, seed);
  const Partition partition = PartitionData(*data, game, seed);
  ComparisonConfig config;
  config.num_players = 10;
  config.budget_terms = 10;
  config.master_seed = seed;
  config.methods = {Method::kMonteCarlo, Method::kDuPlusPlus};
  const auto table = RunComparison(
      config, MakeEmpiricalComparisonGame(data, partition, ModelKind::kLogistic, seed));
  std::filesystem::remove_all(dir);
  const auto mc = table.Series(Method::kMonteCarlo);
  const auto pp = table.Series(Method::kDuPlusPlus);
  int wins = 0;
  for (std::size_t b = 0; b < mc.size(); ++b) wins += pp[b] <= mc[b];
  return {wins >= 7, Fmt("DU++ <= MC in %.0f/10 (mean MSE %.3g vs %.3g)", wins,
                         table.summaries[1].mean, table.summaries[0].mean)};
}

std::string RunCliCapture(std::vector<std::string> args, int* code) {
  args.insert(args.begin(), "dsval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  *code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  std::istringstream in(out.str());
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.rfind("# dsval version", 0) != 0) kept += line + "\n";
  }
  return kept;
}

Outcome Determinism() {
  const std::vector<std::vector<std::string>> experiments = {
      {"bench", "compare", "--I", "8", "--budget", "8", "--estimations", "5",
       "--repetitions", "4", "--game", "regression:d=3,sigma=1"},
      {"converge", "--I", "10,50", "--samples", "20000"},
      {"bounds", "--I-grid", "3,10,30", "--draws", "10", "--rho-points", "50"},
      {"estimate", "--sizes", "4,8,15,16,23,42", "--method", "owen", "--budget", "20"},
  };
  int identical = 0;
  for (auto args : experiments) {
    args.insert(args.end(), {"--seed", "2024", "--format", "csv"});
    std::vector<std::string> outputs;
    bool ok = true;
    for (const char* threads : {"1", "2", "4"}) {
      auto run = args;
      run.insert(run.end(), {"--threads", threads});
      int code = 0;
      outputs.push_back(RunCliCapture(run, &code));
      ok &= code == kExitOk && !outputs.back().empty();
    }
    identical += ok && outputs[0] == outputs[1] && outputs[1] == outputs[2];
  }
  SetMaxThreads(1);
  return {identical == static_cast<int>(experiments.size()),
          Fmt("%.0f of %.0f experiments byte-identical across 1, 2, 4 threads", identical,
              static_cast<double>(experiments.size()))};
}

}  // namespace
}  // namespace dsval

int main() {
  using Clock = std::chrono::steady_clock;
  const std::pair<const char*, std::function<dsval::Outcome()>> criteria[] = {
      {"exact form equivalence", dsval::ExactFormEquivalence},
      {"axiom suite", dsval::AxiomSuite},
      {"DU exact for equal sizes", dsval::DuHomogeneity},
      {"DU bias bound validity", dsval::BoundValidity},
      {"regression closed form vs oracle", dsval::ClosedFormOracle},
      {"sampling estimators unbiased", dsval::Unbiasedness},
      {"MSE comparison, regression game", dsval::RegressionMseComparison},
      {"coalition size convergence", dsval::SizeConvergence},
      {"bound crossing", dsval::BoundCrossing},
      {"MSE comparison, synthetic classification", dsval::ClassificationMseComparison},
      {"determinism across thread counts", dsval::Determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = Clock::now();
    dsval::Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    failures += !outcome.pass;
    std::printf("criterion %2d %-42s %s  %s [%.1fs]\n", index, name,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
