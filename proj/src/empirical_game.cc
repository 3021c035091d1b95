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

#include "dsval/empirical_game.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "dsval/rng.h"

namespace dsval {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

bool ParseDouble(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Draws `count` distinct entries of `pool` (partial Fisher-Yates on a copy).
std::vector<int64_t> SampleRows(const std::vector<int64_t>& pool, int64_t count,
                                Rng& rng) {
  std::vector<int64_t> scratch = pool;
  for (int64_t k = 0; k < count; ++k) {
    const auto pick = k + static_cast<int64_t>(rng.Below(scratch.size() - k));
    std::swap(scratch[k], scratch[pick]);
  }
  scratch.resize(count);
  return scratch;
}

double ScoreOf(ModelKind kind, const TabularDataset& data,
               const std::vector<int64_t>& rows, const Partition& partition,
               const TrainingOptions& options, uint64_t seed) {
  if (rows.empty()) {
    return Evaluate(ZeroModel(kind, data.features.cols()), data,
                    partition.holdout_rows);
  }
  return Evaluate(Train(kind, data, rows, options, seed), data,
                  partition.holdout_rows);
}

void CheckPartition(const TabularDataset& data, const Partition& partition) {
  if (partition.holdout_rows.empty()) {
    throw std::invalid_argument("partition has an empty hold-out set");
  }
  auto check = [&](const std::vector<int64_t>& rows) {
    for (int64_t r : rows) {
      if (r < 0 || r >= data.rows()) {
        throw std::out_of_range("partition row outside the dataset");
      }
    }
  };
  check(partition.holdout_rows);
  for (const auto& rows : partition.player_rows) check(rows);
}

}  // namespace

Task ParseTask(const std::string& name) {
  if (name == "clf") return Task::kClassification;
  if (name == "reg") return Task::kRegression;
  throw std::invalid_argument("task must be 'clf' or 'reg'");
}

ModelKind DefaultModel(Task task) {
  return task == Task::kClassification ? ModelKind::kLogistic
                                       : ModelKind::kLinear;
}

TabularDataset LoadCsv(const std::string& path, const std::string& label_column,
                       Task task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const std::vector<std::string> header = SplitCsvLine(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw std::runtime_error("label column '" + label_column + "' not found");
  }
  const auto label_index = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t width = header.size();

  TabularDataset data;
  data.task = task;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != width) {
      ++data.dropped_rows;
      continue;
    }
    rows.push_back(std::move(fields));
  }

  // A column is categorical when most of its non-empty cells are not numbers.
  std::vector<bool> categorical(width, false);
  for (std::size_t c = 0; c < width; ++c) {
    if (c == label_index) continue;
    int64_t numeric = 0, text = 0;
    double scratch = 0.0;
    for (const auto& row : rows) {
      if (row[c].empty()) continue;
      (ParseDouble(row[c], scratch) ? numeric : text)++;
    }
    categorical[c] = text > numeric;
  }

  std::vector<double> labels;
  std::vector<const std::vector<std::string>*> kept;
  for (const auto& row : rows) {
    double label = 0.0;
    bool ok = ParseDouble(row[label_index], label);
    if (ok && task == Task::kClassification) ok = label == 0.0 || label == 1.0;
    for (std::size_t c = 0; c < width && ok; ++c) {
      if (c == label_index) continue;
      double scratch = 0.0;
      ok = categorical[c] ? !row[c].empty() : ParseDouble(row[c], scratch);
    }
    if (!ok) {
      ++data.dropped_rows;
      continue;
    }
    labels.push_back(label);
    kept.push_back(&row);
  }
  if (kept.empty()) throw std::runtime_error("no usable rows in " + path);

  // Column layout: numeric columns keep their slot, categorical columns
  // expand into one indicator per level in first-appearance order.
  struct Slot {
    std::size_t source;
    int first_feature;
    std::vector<std::string> levels;
  };
  std::vector<Slot> slots;
  int features = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == label_index) continue;
    Slot slot{c, features, {}};
    if (categorical[c]) {
      for (const auto* row : kept) {
        const auto& v = (*row)[c];
        if (std::find(slot.levels.begin(), slot.levels.end(), v) ==
            slot.levels.end()) {
          slot.levels.push_back(v);
        }
      }
      for (const auto& level : slot.levels) {
        data.column_names.push_back(header[c] + "=" + level);
      }
      features += static_cast<int>(slot.levels.size());
    } else {
      data.column_names.push_back(header[c]);
      features += 1;
    }
    slots.push_back(std::move(slot));
  }

  const auto n = static_cast<Eigen::Index>(kept.size());
  data.features = Eigen::MatrixXd::Zero(n, features);
  data.labels = Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = *kept[r];
    for (const auto& slot : slots) {
      const auto& cell = row[slot.source];
      if (slot.levels.empty()) {
        ParseDouble(cell, data.features(r, slot.first_feature));
      } else {
        const auto level =
            std::find(slot.levels.begin(), slot.levels.end(), cell) -
            slot.levels.begin();
        data.features(r, slot.first_feature + level) = 1.0;
      }
    }
  }

  for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
    auto col = data.features.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n));
    if (sd > 0.0) col /= sd;
  }
  return data;
}

Partition PartitionRows(int64_t total_rows, const GameSpec& game, uint64_t seed,
                        double holdout_fraction) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument("holdout fraction must lie in (0, 1)");
  }
  const auto holdout = static_cast<int64_t>(
      std::llround(holdout_fraction * static_cast<double>(total_rows)));
  if (holdout < 1 || game.total() + holdout > total_rows) {
    throw std::invalid_argument(
        "not enough rows: need " + std::to_string(game.total() + holdout) +
        ", have " + std::to_string(total_rows));
  }
  std::vector<int64_t> order(total_rows);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, {kTagPartition});
  for (int64_t k = total_rows; k > 1; --k) {
    std::swap(order[k - 1], order[rng.Below(k)]);
  }

  Partition partition;
  auto next = order.begin();
  partition.holdout_rows.assign(next, next + holdout);
  next += holdout;
  for (int64_t n : game.sizes()) {
    partition.player_rows.emplace_back(next, next + n);
    next += n;
  }
  return partition;
}

Partition PartitionData(const TabularDataset& data, const GameSpec& game,
                        uint64_t seed, double holdout_fraction) {
  return PartitionRows(data.rows(), game, seed, holdout_fraction);
}

double TrainedModel::Predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const auto d = weights.size() - 1;
  const double z = x.dot(weights.head(d)) + weights[d];
  return kind == ModelKind::kLogistic ? Sigmoid(z) : z;
}

TrainedModel ZeroModel(ModelKind kind, int dims) {
  TrainedModel model;
  model.kind = kind;
  model.weights = Eigen::VectorXd::Zero(dims + 1);
  return model;
}

TrainedModel Train(ModelKind kind, const TabularDataset& data,
                   std::span<const int64_t> rows, const TrainingOptions& options,
                   uint64_t seed) {
  if (rows.empty()) throw std::invalid_argument("cannot train on zero rows");
  if (options.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (options.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");

  const auto d = data.features.cols();
  TrainedModel model = ZeroModel(kind, static_cast<int>(d));
  model.train_steps = options.steps;
  model.learning_rate = options.learning_rate;

  std::vector<int64_t> scratch(rows.begin(), rows.end());
  const auto n = static_cast<int64_t>(scratch.size());
  const int64_t batch = std::min<int64_t>(options.batch_size, n);
  Rng rng(seed);
  Eigen::VectorXd grad(d + 1);
  for (int step = 0; step < options.steps; ++step) {
    grad.setZero();
    for (int64_t k = 0; k < batch; ++k) {
      std::swap(scratch[k], scratch[k + rng.Below(n - k)]);
      const int64_t r = scratch[k];
      const auto x = data.features.row(r);
      const double residual = model.Predict(x) - data.labels[r];
      grad.head(d) += residual * x.transpose();
      grad[d] += residual;
    }
    model.weights -= options.learning_rate / static_cast<double>(batch) * grad;
  }
  if (!model.weights.allFinite()) {
    throw NonFiniteUtilityError("SGD diverged; lower the learning rate");
  }
  return model;
}

double Evaluate(const TrainedModel& model, const TabularDataset& data,
                std::span<const int64_t> holdout) {
  if (holdout.empty()) throw std::invalid_argument("empty hold-out set");
  double total = 0.0;
  for (int64_t r : holdout) {
    const double p = model.Predict(data.features.row(r));
    if (data.task == Task::kClassification) {
      total += ((p >= 0.5 ? 1.0 : 0.0) == data.labels[r]) ? 1.0 : 0.0;
    } else {
      const double e = p - data.labels[r];
      total -= e * e;
    }
  }
  return total / static_cast<double>(holdout.size());
}

SetUtility MakeEmpiricalSetUtility(std::shared_ptr<const TabularDataset> data,
                                   const Partition& partition, ModelKind kind,
                                   uint64_t seed,
                                   const TrainingOptions& options) {
  CheckPartition(*data, partition);
  auto shared = std::make_shared<const Partition>(partition);
  const double zero = ScoreOf(kind, *data, {}, partition, options, 0);
  const int num_players = static_cast<int>(partition.player_rows.size());
  return SetUtility([=](const Coalition& s) {
    if (s.num_players() != num_players) {
      throw std::invalid_argument("coalition and partition disagree on I");
    }
    if (s.mask() == 0) return 0.0;
    std::vector<int64_t> rows;
    for (uint64_t m = s.mask(); m != 0; m &= m - 1) {
      const auto& own = shared->player_rows[std::countr_zero(m)];
      rows.insert(rows.end(), own.begin(), own.end());
    }
    return ScoreOf(kind, *data, rows, *shared, options,
                   DeriveSeed(seed, {kTagTraining, s.mask()})) -
           zero;
  });
}

EmpiricalProxy MakeEmpiricalCardinalProxy(
    std::shared_ptr<const TabularDataset> data, const Partition& partition,
    int player, ModelKind kind, uint64_t seed, const ProxyOptions& options) {
  CheckPartition(*data, partition);
  const int num_players = static_cast<int>(partition.player_rows.size());
  if (player < 0 || player >= num_players) {
    throw std::out_of_range("player index out of range");
  }
  if (options.m_draws < 1) throw std::invalid_argument("m_draws must be >= 1");

  struct State {
    std::vector<int64_t> own;
    std::vector<int64_t> pool;
    Partition partition;
  };
  auto state = std::make_shared<State>();
  state->own = partition.player_rows[player];
  for (int j = 0; j < num_players; ++j) {
    if (j == player) continue;
    const auto& rows = partition.player_rows[j];
    state->pool.insert(state->pool.end(), rows.begin(), rows.end());
  }
  state->partition = partition;
  std::shared_ptr<const State> shared = state;

  auto clamped = std::make_shared<std::atomic<int64_t>>(0);
  const double zero = ScoreOf(kind, *data, {}, partition, options.training, 0);
  const auto own_size = static_cast<double>(shared->own.size());
  const auto pool_size = static_cast<int64_t>(shared->pool.size());

  // Both sides of a DU term draw the same pool rows (keyed on the pool row
  // count), so a marginal difference only reflects player i's data.
  auto score = [=](int64_t from_pool, bool include_own) {
    if (from_pool > pool_size) {
      clamped->fetch_add(1);
      from_pool = pool_size;
    }
    from_pool = std::max<int64_t>(from_pool, 0);
    double total = 0.0;
    for (int draw = 0; draw < options.m_draws; ++draw) {
      Rng rng(seed, {kTagProxy, static_cast<uint64_t>(player),
                     static_cast<uint64_t>(from_pool),
                     static_cast<uint64_t>(draw)});
      std::vector<int64_t> rows = SampleRows(shared->pool, from_pool, rng);
      if (include_own) rows.insert(rows.end(), shared->own.begin(), shared->own.end());
      total += ScoreOf(kind, *data, rows, shared->partition, options.training,
                       rng()) -
               zero;
    }
    return total / options.m_draws;
  };
  CardinalProxy proxy{
      CardinalUtility([=](double n) { return score(std::llround(n), false); }),
      CardinalUtility(
          [=](double n) { return score(std::llround(n - own_size), true); })};
  return {std::move(proxy), clamped};
}

void WriteSyntheticClassificationCsv(const std::string& path, int64_t rows,
                                     uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  Rng rng(seed, {kTagSynthetic});
  std::normal_distribution<double> normal;
  static constexpr const char* kGroups[] = {"red", "green", "blue"};
  out << "x1,x2,noise,group,label\n";
  out.precision(17);
  for (int64_t r = 0; r < rows; ++r) {
    const double x1 = normal(rng);
    const double x2 = normal(rng);
    const double noise = normal(rng);
    const char* group = kGroups[rng.Below(3)];
    const double margin = 1.5 * x1 - 1.0 * x2 + 0.5 * normal(rng);
    out << x1 << ',' << x2 << ',' << noise << ',' << group << ','
        << (margin > 0.0 ? 1 : 0) << '\n';
  }
}

}  // namespace dsval
