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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsval/bench.h"
#include "dsval/bounds.h"
#include "dsval/cli.h"
#include "dsval/estimators.h"
#include "dsval/exact.h"
#include "dsval/game.h"
#include "dsval/parallel.h"

namespace py = pybind11;

namespace dsval {
namespace {

// Wraps a Python callable so worker threads take the GIL before calling it.
CardinalUtility FromPython(py::function fn) {
  std::shared_ptr<py::function> holder(new py::function(std::move(fn)), [](py::function* f) {
    py::gil_scoped_acquire gil;
    delete f;
  });
  return CardinalUtility([holder](double n) {
    py::gil_scoped_acquire gil;
    return (*holder)(n).cast<double>();
  });
}

py::dict ToDict(const ValuationVector& v) {
  py::dict d;
  d["method"] = v.method;
  d["values"] = v.values;
  d["budget_used"] = v.budget_used;
  if (v.seed) {
    d["seed"] = *v.seed;
  } else {
    d["seed"] = py::none();
  }
  return d;
}

py::dict Exact(const std::vector<int64_t>& sizes, py::function w, const std::string& form) {
  const GameSpec game(sizes);
  const CardinalUtility utility = FromPython(std::move(w));
  ExactConfig config;
  if (form == "permutations") {
    config.form = ExactForm::kPermutations;
  } else if (form != "subsets") {
    throw std::invalid_argument("form must be 'subsets' or 'permutations'");
  }
  ValuationVector v;
  {
    py::gil_scoped_release release;
    v = ExactShapley(CardinalToSetUtility(utility, game), game, config);
  }
  return ToDict(v);
}

py::dict EstimateValues(const std::vector<int64_t>& sizes, py::function w,
                        const std::string& method, int64_t budget, uint64_t seed) {
  const GameSpec game(sizes);
  const CardinalUtility utility = FromPython(std::move(w));
  ValuationVector v;
  {
    py::gil_scoped_release release;
    const SetUtility u = CardinalToSetUtility(utility, game);
    v = Estimate(u, &utility, game,
                 {ParseMethod(method), budget > 0 ? budget : game.num_players(), seed});
  }
  return ToDict(v);
}

py::dict Convergence(const std::vector<int64_t>& sizes, int64_t samples, uint64_t seed) {
  ConvergenceResult r;
  {
    py::gil_scoped_release release;
    r = ConvergenceExperiment(GameSpec(sizes), samples, seed);
  }
  py::dict d;
  d["I"] = r.num_players;
  d["samples"] = r.samples;
  d["ks"] = r.ks;
  d["histogram"] = r.histogram;
  return d;
}

py::list Bounds(const std::vector<int>& grid, int64_t n_max, int draws, double delta,
                uint64_t seed, int rho_points, bool per_draw) {
  BoundsExperimentConfig config;
  config.grid = grid;
  config.n_max = n_max;
  config.draws = draws;
  config.delta = delta;
  config.seed = seed;
  config.rho_grid_points = rho_points;
  std::vector<BoundsRow> rows;
  {
    py::gil_scoped_release release;
    rows = BoundsExperiment(config, per_draw);
  }
  py::list out;
  for (const auto& row : rows) {
    py::dict d;
    d["I"] = row.num_players;
    if (per_draw) d["draw"] = row.draw;
    d["du_bound_mean"] = row.du_bound_mean;
    d["mc_error"] = row.mc_error;
    out.append(d);
  }
  return out;
}

py::tuple RunCliCaptured(std::vector<std::string> args) {
  args.insert(args.begin(), "dsval");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace dsval

PYBIND11_MODULE(_core, m) {
  using namespace dsval;
  m.doc() = "Shapley-value data valuation";
  m.attr("__version__") = DSVAL_VERSION;

  py::register_exception<NonFiniteUtilityError>(m, "NonFiniteUtilityError", PyExc_ValueError);

  m.def("exact_shapley", &Exact, py::arg("sizes"), py::arg("w"),
        py::arg("form") = "subsets",
        "Exact Shapley values of the game u(S) = w(n_S).");
  m.def("estimate", &EstimateValues, py::arg("sizes"), py::arg("w"),
        py::arg("method") = "du", py::arg("budget") = 0, py::arg("seed") = 0,
        "Approximate Shapley values; budget is terms per player, 0 for I.");
  m.def(
      "du_shapley",
      [](const std::vector<int64_t>& sizes, py::function w, bool plus_plus) {
        const GameSpec game(sizes);
        const CardinalUtility utility = FromPython(std::move(w));
        ValuationVector v;
        {
          py::gil_scoped_release release;
          v = plus_plus ? DuShapleyPlusPlus(utility, game) : DuShapley(utility, game);
        }
        return ToDict(v);
      },
      py::arg("sizes"), py::arg("w"), py::arg("plus_plus") = false);
  m.def("t_perm", &TPerm, py::arg("epsilon"), py::arg("delta"), py::arg("range"),
        py::arg("num_players"));
  m.def("mc_error_at_budget", &McErrorAtBudget, py::arg("w_grand"), py::arg("num_players"),
        py::arg("delta"));
  m.def(
      "estimate_rho",
      [](py::function w, const std::vector<double>& grid) {
        const CardinalUtility utility = FromPython(std::move(w));
        py::gil_scoped_release release;
        return EstimateRho(utility, grid);
      },
      py::arg("w"), py::arg("grid"));
  m.def(
      "du_bias_bound",
      [](const std::vector<int64_t>& sizes, py::function w, int player, double rho) {
        const CardinalUtility utility = FromPython(std::move(w));
        py::gil_scoped_release release;
        return DuBiasBound(utility, GameSpec(sizes), player, rho);
      },
      py::arg("sizes"), py::arg("w"), py::arg("player"), py::arg("rho"));
  m.def("log_grid", &LogGrid, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def("convergence_experiment", &Convergence, py::arg("sizes"),
        py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def("bounds_experiment", &Bounds, py::arg("grid"), py::arg("n_max") = 100,
        py::arg("draws") = 100, py::arg("delta") = 0.1, py::arg("seed") = 0,
        py::arg("rho_points") = 200, py::arg("per_draw") = false);
  m.def("set_max_threads", &SetMaxThreads, py::arg("threads"));
  m.def("max_threads", &MaxThreads);
  m.def("run_cli", &RunCliCaptured, py::arg("args"),
        "Runs the command line tool and returns (exit_code, stdout, stderr).");
}
