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

// Valuation on tabular data: CSV ingestion, random partition across players,
// small SGD-trained models scored on a hold-out set, and cardinal proxies so
// that DU-type estimators apply.

#ifndef DSVAL_EMPIRICAL_GAME_H_
#define DSVAL_EMPIRICAL_GAME_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsval/estimators.h"
#include "dsval/game.h"

namespace dsval {

enum class Task { kClassification, kRegression };
enum class ModelKind { kLogistic, kLinear };

Task ParseTask(const std::string& name);  // "clf" or "reg"
ModelKind DefaultModel(Task task);

struct TabularDataset {
  Eigen::MatrixXd features;  // n x d, standardized
  Eigen::VectorXd labels;    // n
  std::vector<std::string> column_names;
  Task task = Task::kClassification;
  int64_t dropped_rows = 0;

  int64_t rows() const { return features.rows(); }
};

// Reads a comma-separated file with a header row. A feature column whose
// non-empty cells are mostly non-numeric is one-hot encoded (categories in
// order of first appearance); otherwise a cell that does not parse drops its
// row, as does a row with the wrong field count or, for classification, a
// label outside {0, 1}. Features are standardized with the mean and standard
// deviation of the kept rows. Throws std::runtime_error on a missing file,
// missing label column, or no usable rows.
TabularDataset LoadCsv(const std::string& path, const std::string& label_column,
                       Task task);

struct Partition {
  std::vector<std::vector<int64_t>> player_rows;
  std::vector<int64_t> holdout_rows;
};

// Shuffles the rows with `seed`; the first round(holdout_fraction * n) go to
// the hold-out set, then each player takes its size in order. Leftover rows
// are unused. Throws std::invalid_argument if rows run out.
Partition PartitionRows(int64_t total_rows, const GameSpec& game, uint64_t seed,
                        double holdout_fraction = 0.10);
Partition PartitionData(const TabularDataset& data, const GameSpec& game,
                        uint64_t seed, double holdout_fraction = 0.10);

struct TrainingOptions {
  int steps = 20;
  double learning_rate = 0.1;
  int batch_size = 32;
};

struct TrainedModel {
  ModelKind kind = ModelKind::kLogistic;
  Eigen::VectorXd weights;  // d + 1, bias last
  int train_steps = 0;
  double learning_rate = 0.0;

  double Predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

// Zero weights: predicts 0.5 (logistic) or 0 (linear).
TrainedModel ZeroModel(ModelKind kind, int dims);

// Minibatch SGD from zero weights for a fixed number of steps; each step uses
// min(batch_size, |rows|) rows drawn without replacement. Log-loss for
// logistic, half squared error for linear. Throws std::invalid_argument on
// empty `rows` or steps < 1.
TrainedModel Train(ModelKind kind, const TabularDataset& data,
                   std::span<const int64_t> rows, const TrainingOptions& options,
                   uint64_t seed);

// Accuracy at threshold 0.5 for classification, negative MSE for regression.
double Evaluate(const TrainedModel& model, const TabularDataset& data,
                std::span<const int64_t> holdout);

// u(S) = Evaluate(Train(pooled rows of S)) minus the zero-model score, with
// the training seed derived from (seed, S).
SetUtility MakeEmpiricalSetUtility(std::shared_ptr<const TabularDataset> data,
                                   const Partition& partition, ModelKind kind,
                                   uint64_t seed,
                                   const TrainingOptions& options = {});

struct ProxyOptions {
  int m_draws = 1;
  TrainingOptions training;
};

// Cardinal proxy for player i. pool(n) trains on round(n) rows drawn without
// replacement from the other players' pooled rows; with_player(n) trains on
// player i's rows plus round(n - n_i) pooled rows. Scores are averaged over
// m_draws draws, shifted by the zero-model score, and deterministic per
// (seed, n, draw). Sizes beyond the pool are clamped; the returned flag
// counter records how often.
struct EmpiricalProxy {
  CardinalProxy proxy;
  std::shared_ptr<std::atomic<int64_t>> clamped;
};
EmpiricalProxy MakeEmpiricalCardinalProxy(
    std::shared_ptr<const TabularDataset> data, const Partition& partition,
    int player, ModelKind kind, uint64_t seed, const ProxyOptions& options = {});

// Writes a seeded synthetic binary classification CSV: two informative
// Gaussian features, one noise feature and a three-level categorical column.
void WriteSyntheticClassificationCsv(const std::string& path, int64_t rows,
                                     uint64_t seed);

}  // namespace dsval

#endif  // DSVAL_EMPIRICAL_GAME_H_
