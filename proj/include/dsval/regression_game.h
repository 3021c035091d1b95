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

// Linear-regression data-sharing game: y = x^T theta + eps with
// x ~ N(0, Sigma) and eps ~ N(0, sigma_eps^2), utility = negative expected
// test MSE of the pooled least-squares fit.

#ifndef DSVAL_REGRESSION_GAME_H_
#define DSVAL_REGRESSION_GAME_H_

#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "dsval/game.h"
#include "dsval/rng.h"

namespace dsval {

struct RegressionGameParams {
  int d = 1;
  double sigma_eps = 1.0;
  // Tr[C Sigma^{-1}] with C the second moment of the test distribution;
  // equals d when test and training features share a distribution.
  double trace_term = 1.0;
  // Sizes below this are clamped to it.
  double floor_n = 3.0;

  // trace_term = d, floor_n = d + 2.
  static RegressionGameParams Make(int d, double sigma_eps);
  void Validate() const;
};

// w(n) = -sigma_eps^2 trace_term / (max(n, floor_n) - d - 1).
// Non-decreasing on [0, inf), constant below floor_n, tends to 0 from below.
CardinalUtility ClosedFormUtility(const RegressionGameParams& params);

struct RegressionData {
  Eigen::MatrixXd x;  // n x d
  Eigen::VectorXd y;  // n
};

// Draws n rows of the generative model. `sigma_chol` is the lower Cholesky
// factor of Sigma.
RegressionData GenerateRegressionData(const Eigen::MatrixXd& sigma_chol,
                                      const Eigen::VectorXd& theta, int64_t n,
                                      double sigma_eps, Rng& rng);

// Lower Cholesky factor; throws std::invalid_argument unless Sigma is
// symmetric positive definite.
Eigen::MatrixXd CholeskyFactor(const Eigen::MatrixXd& sigma);

// Thrown when a normal-equation system is singular (condition number above
// 1e12, or not positive definite).
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// theta = (X^T X)^{-1} X^T y via a Cholesky solve.
Eigen::VectorXd SolveLeastSquares(const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y);

// Ridge fit of the alpha-weighted stacked design: each (X_i, y_i) is scaled
// by sqrt(alpha_i / n_i), then theta = (lambda I + X^T X)^{-1} X^T y.
// alphas must lie in [0, 1] and sum to 1. With alpha_i = n_i / n and
// lambda = 0 this is ordinary least squares on the concatenated rows.
Eigen::VectorXd FitWeightedRidge(std::span<const RegressionData> datasets,
                                 std::span<const double> alphas,
                                 double lambda);

struct OracleOptions {
  int64_t mc_reps = 2000;
  int64_t test_samples = 2000;
  uint64_t seed = 0;
};

// Monte Carlo estimate of -E[(x^T theta_hat - x^T theta)^2] at sample size n:
// each repetition draws a fresh training set, fits least squares, and scores
// it on `test_samples` fresh test points. Singular draws are redrawn, at most
// 10 * mc_reps attempts in total. Requires n >= d + 2.
double EmpiricalUtilityOracle(const RegressionGameParams& params,
                              const Eigen::MatrixXd& sigma,
                              const Eigen::VectorXd& theta, int64_t n,
                              const OracleOptions& options);

enum class RegressionUtilityMode { kClosedForm, kEmpirical };

// kClosedForm: u(S) = w(n_S) with the closed form.
// kEmpirical: one dataset per player and one test sample are drawn from
// `seed`; u(S) is minus the test MSE of the least-squares fit on the pooled
// rows of S. Coalitions with n_S < floor_n score the closed-form saturation
// value. Both are normalized so that u(empty) = 0.
SetUtility MakeRegressionSetUtility(const RegressionGameParams& params,
                                    const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& theta,
                                    const GameSpec& game,
                                    RegressionUtilityMode mode, uint64_t seed,
                                    int64_t test_samples = 2000);

// "identity", or a path to a whitespace/comma separated d x d matrix.
Eigen::MatrixXd ParseSigmaSpec(const std::string& spec, int d);
// "ones", "standard-normal:<seed>", or a path to d values.
Eigen::VectorXd ParseThetaSpec(const std::string& spec, int d);

}  // namespace dsval

#endif  // DSVAL_REGRESSION_GAME_H_
