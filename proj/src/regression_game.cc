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

#include "dsval/regression_game.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dsval/parallel.h"

namespace dsval {
namespace {

constexpr double kMaxCondition = 1e12;

Eigen::VectorXd GaussianVector(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (int k = 0; k < d; ++k) v[k] = normal(rng);
  return v;
}

Eigen::MatrixXd GaussianRows(int64_t n, const Eigen::MatrixXd& sigma_chol,
                             Rng& rng) {
  std::normal_distribution<double> normal;
  const auto d = sigma_chol.rows();
  Eigen::MatrixXd z(n, d);
  for (int64_t r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < d; ++k) z(r, k) = normal(rng);
  }
  // Rows x^T = z^T L^T, so Cov(x) = L L^T = Sigma.
  return z * sigma_chol.transpose();
}

std::vector<double> ReadNumbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream tokens(text);
  std::vector<double> values;
  double v = 0.0;
  while (tokens >> v) values.push_back(v);
  if (!tokens.eof()) throw std::runtime_error("non-numeric entry in " + path);
  return values;
}

// Least-squares fit that reports failure instead of throwing.
bool TrySolve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
              Eigen::VectorXd& out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                     Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return false;
  out = llt.solve(rhs);
  return true;
}

}  // namespace

RegressionGameParams RegressionGameParams::Make(int d, double sigma_eps) {
  RegressionGameParams p;
  p.d = d;
  p.sigma_eps = sigma_eps;
  p.trace_term = d;
  p.floor_n = d + 2.0;
  return p;
}

void RegressionGameParams::Validate() const {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(sigma_eps > 0.0)) throw std::invalid_argument("sigma_eps must be > 0");
  if (!(trace_term > 0.0)) throw std::invalid_argument("trace_term must be > 0");
  if (!(floor_n > d + 1.0)) {
    throw std::invalid_argument("floor_n must exceed d + 1");
  }
}

CardinalUtility ClosedFormUtility(const RegressionGameParams& params) {
  params.Validate();
  const double scale = params.sigma_eps * params.sigma_eps * params.trace_term;
  const double shift = params.d + 1.0;
  const double floor_n = params.floor_n;
  return CardinalUtility([=](double n) {
    return -scale / (std::max(n, floor_n) - shift);
  });
}

Eigen::MatrixXd CholeskyFactor(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw std::invalid_argument("Sigma must be a non-empty square matrix");
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw std::invalid_argument("Sigma must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("Sigma must be positive definite");
  }
  return llt.matrixL();
}

RegressionData GenerateRegressionData(const Eigen::MatrixXd& sigma_chol,
                                      const Eigen::VectorXd& theta, int64_t n,
                                      double sigma_eps, Rng& rng) {
  if (theta.size() != sigma_chol.rows()) {
    throw std::invalid_argument("theta and Sigma dimensions differ");
  }
  RegressionData data;
  data.x = GaussianRows(n, sigma_chol, rng);
  std::normal_distribution<double> noise(0.0, 1.0);
  data.y = data.x * theta;
  for (int64_t r = 0; r < n; ++r) data.y[r] += sigma_eps * noise(rng);
  return data;
}

Eigen::VectorXd SolveLeastSquares(const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y) {
  Eigen::VectorXd theta;
  if (!TrySolve(x.transpose() * x, x.transpose() * y, theta)) {
    throw SingularSystemError("normal equations are singular");
  }
  return theta;
}

Eigen::VectorXd FitWeightedRidge(std::span<const RegressionData> datasets,
                                 std::span<const double> alphas,
                                 double lambda) {
  if (datasets.empty() || datasets.size() != alphas.size()) {
    throw std::invalid_argument("need one alpha per dataset");
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  double alpha_sum = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw std::invalid_argument("alphas must lie in [0, 1]");
    }
    alpha_sum += a;
  }
  if (std::abs(alpha_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("alphas must sum to 1");
  }

  const auto d = datasets.front().x.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto& data = datasets[i];
    if (data.x.cols() != d || data.x.rows() != data.y.size()) {
      throw std::invalid_argument("inconsistent dataset dimensions");
    }
    if (data.x.rows() == 0) continue;
    // Scaling rows by sqrt(alpha/n) scales the Gram blocks by alpha/n.
    const double weight = alphas[i] / static_cast<double>(data.x.rows());
    gram.noalias() += weight * data.x.transpose() * data.x;
    rhs.noalias() += weight * data.x.transpose() * data.y;
  }
  gram.diagonal().array() += lambda;

  Eigen::VectorXd theta;
  if (!TrySolve(gram, rhs, theta)) {
    throw SingularSystemError("weighted ridge system is singular");
  }
  return theta;
}

double EmpiricalUtilityOracle(const RegressionGameParams& params,
                              const Eigen::MatrixXd& sigma,
                              const Eigen::VectorXd& theta, int64_t n,
                              const OracleOptions& options) {
  params.Validate();
  if (n < params.d + 2) throw std::invalid_argument("oracle needs n >= d + 2");
  if (options.mc_reps < 1 || options.test_samples < 1) {
    throw std::invalid_argument("mc_reps and test_samples must be >= 1");
  }
  const Eigen::MatrixXd chol = CholeskyFactor(sigma);
  const int64_t max_attempts = 10 * options.mc_reps;

  std::vector<double> mse(options.mc_reps);
  std::vector<int64_t> attempts(options.mc_reps, 0);
  ParallelFor(options.mc_reps, [&](std::size_t rep) {
    Eigen::VectorXd fit;
    for (uint64_t attempt = 0;; ++attempt) {
      Rng rng(options.seed, {kTagOracle, rep, attempt});
      const RegressionData data =
          GenerateRegressionData(chol, theta, n, params.sigma_eps, rng);
      ++attempts[rep];
      if (TrySolve(data.x.transpose() * data.x, data.x.transpose() * data.y,
                   fit)) {
        break;
      }
      if (attempts[rep] >= max_attempts) break;
    }
    Rng test_rng(options.seed, {kTagRegressionTest, rep});
    const Eigen::MatrixXd test = GaussianRows(options.test_samples, chol, test_rng);
    const Eigen::VectorXd delta =
        fit.size() ? Eigen::VectorXd(fit - theta) : Eigen::VectorXd(-theta);
    const Eigen::VectorXd err = test * delta;
    mse[rep] = err.squaredNorm() / static_cast<double>(options.test_samples);
  });

  int64_t total_attempts = 0;
  for (int64_t a : attempts) total_attempts += a;
  if (total_attempts > max_attempts) {
    throw SingularSystemError("too many singular draws in the oracle");
  }
  double sum = 0.0;
  for (double m : mse) sum += m;
  return -sum / static_cast<double>(options.mc_reps);
}

SetUtility MakeRegressionSetUtility(const RegressionGameParams& params,
                                    const Eigen::MatrixXd& sigma,
                                    const Eigen::VectorXd& theta,
                                    const GameSpec& game,
                                    RegressionUtilityMode mode, uint64_t seed,
                                    int64_t test_samples) {
  params.Validate();
  const CardinalUtility closed = ClosedFormUtility(params);
  if (mode == RegressionUtilityMode::kClosedForm) {
    return NormalizeUtility(CardinalToSetUtility(closed, game),
                            game.num_players());
  }

  const Eigen::MatrixXd chol = CholeskyFactor(sigma);
  auto players = std::make_shared<std::vector<RegressionData>>();
  for (int i = 0; i < game.num_players(); ++i) {
    Rng rng(seed, {kTagRegressionData, static_cast<uint64_t>(i)});
    players->push_back(
        GenerateRegressionData(chol, theta, game.size(i), params.sigma_eps, rng));
  }
  Rng test_rng(seed, {kTagRegressionTest});
  auto test = std::make_shared<const Eigen::MatrixXd>(
      GaussianRows(test_samples, chol, test_rng));
  const double saturated = closed(0.0);
  const double floor_n = params.floor_n;

  SetUtility raw([=, players = std::shared_ptr<const std::vector<RegressionData>>(
                         players)](const Coalition& s) {
    const int64_t pooled = AggregateSize(s, game);
    if (static_cast<double>(pooled) < floor_n) return saturated;
    const auto d = theta.size();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
    for (uint64_t m = s.mask(); m != 0; m &= m - 1) {
      const auto& data = (*players)[std::countr_zero(m)];
      gram.noalias() += data.x.transpose() * data.x;
      rhs.noalias() += data.x.transpose() * data.y;
    }
    Eigen::VectorXd fit;
    if (!TrySolve(gram, rhs, fit)) return saturated;
    const Eigen::VectorXd err = *test * (fit - theta);
    return -err.squaredNorm() / static_cast<double>(test->rows());
  });
  return NormalizeUtility(raw, game.num_players());
}

Eigen::MatrixXd ParseSigmaSpec(const std::string& spec, int d) {
  if (spec == "identity") return Eigen::MatrixXd::Identity(d, d);
  const std::vector<double> values = ReadNumbers(spec);
  if (values.size() != static_cast<std::size_t>(d) * d) {
    throw std::invalid_argument("Sigma file must hold d*d values");
  }
  Eigen::MatrixXd sigma(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) sigma(r, c) = values[r * d + c];
  }
  CholeskyFactor(sigma);
  return sigma;
}

Eigen::VectorXd ParseThetaSpec(const std::string& spec, int d) {
  if (spec == "ones") return Eigen::VectorXd::Ones(d);
  const std::string prefix = "standard-normal:";
  if (spec.rfind(prefix, 0) == 0) {
    Rng rng(std::stoull(spec.substr(prefix.size())));
    return GaussianVector(d, rng);
  }
  const std::vector<double> values = ReadNumbers(spec);
  if (values.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("theta file must hold d values");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), d);
}

}  // namespace dsval
