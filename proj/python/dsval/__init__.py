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

"""Shapley-value data valuation."""

from dsval._core import (
    NonFiniteUtilityError,
    __version__,
    bounds_experiment,
    convergence_experiment,
    du_bias_bound,
    du_shapley,
    estimate,
    estimate_rho,
    exact_shapley,
    log_grid,
    max_threads,
    mc_error_at_budget,
    run_cli,
    set_max_threads,
    t_perm,
)

__all__ = [
    "NonFiniteUtilityError",
    "__version__",
    "bounds_experiment",
    "convergence_experiment",
    "du_bias_bound",
    "du_shapley",
    "estimate",
    "estimate_rho",
    "exact_shapley",
    "log_grid",
    "max_threads",
    "mc_error_at_budget",
    "run_cli",
    "set_max_threads",
    "t_perm",
]
