# Copyright 2026 The dsval Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import dsval


def test_exact_sqrt_game_is_efficient():
    out = dsval.exact_shapley([1, 2, 4], math.sqrt)
    assert out["method"] == "exact"
    assert sum(out["values"]) == pytest.approx(math.sqrt(7.0), abs=1e-12)
    assert out["values"][0] == pytest.approx(0.491071, abs=1e-6)


def test_forms_agree():
    a = dsval.exact_shapley([3, 1, 4, 1, 5], lambda n: n * n)["values"]
    b = dsval.exact_shapley([3, 1, 4, 1, 5], lambda n: n * n, form="permutations")["values"]
    assert a == pytest.approx(b, rel=1e-12)


def test_du_is_exact_for_equal_sizes():
    du = dsval.du_shapley([2, 2, 2], lambda n: n * n)["values"]
    assert du == pytest.approx([12.0, 12.0, 12.0], abs=1e-12)


def test_estimators_are_seeded():
    for method in ["mc", "mc-anti", "owen"]:
        a = dsval.estimate([1, 2, 4, 8], math.sqrt, method=method, budget=6, seed=3)
        b = dsval.estimate([1, 2, 4, 8], math.sqrt, method=method, budget=6, seed=3)
        assert a["values"] == b["values"]
        assert a["seed"] == 3


def test_threads_with_python_callable():
    dsval.set_max_threads(3)
    try:
        out = dsval.estimate([1, 2, 4, 8, 16], math.sqrt, method="mc", budget=50, seed=1)
    finally:
        dsval.set_max_threads(1)
    assert len(out["values"]) == 5


def test_callable_errors_propagate():
    def bad(n):
        raise RuntimeError("no")

    with pytest.raises(RuntimeError):
        dsval.exact_shapley([1, 2], bad)
    with pytest.raises(ValueError):
        dsval.exact_shapley([1, 2], lambda n: float("nan"))


def test_bounds_helpers():
    assert dsval.t_perm(0.1, 0.1, 1.0, 10) == 10597
    assert dsval.mc_error_at_budget(1.0, 10, 0.1) == pytest.approx(2 * math.log(200), rel=1e-12)
    grid = dsval.log_grid(1.0, 100.0, 50)
    assert dsval.estimate_rho(lambda n: 3.0 * n, grid) < 1e-6


def test_experiments():
    conv = dsval.convergence_experiment(list(range(1, 51)), samples=5000, seed=2)
    assert 0.0 < conv["ks"] < 0.2
    rows = dsval.bounds_experiment([3, 10], draws=3, rho_points=20)
    assert [r["I"] for r in rows] == [3, 10]


def test_run_cli():
    code, out, err = dsval.run_cli(["exact", "--sizes", "1,2,4", "--format", "csv"])
    assert code == 0, err
    assert "player,size,value" in out
    code, _, _ = dsval.run_cli(["exact", "--bogus"])
    assert code == 1
