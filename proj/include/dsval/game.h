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

// Players, coalitions, dataset sizes and the two utility contracts shared by
// every valuation routine.
//
// A game is described by a GameSpec (one dataset size per player) and either
//   * a SetUtility, u : 2^I -> R, evaluated on coalitions, or
//   * a CardinalUtility, w : R+ -> R, evaluated on aggregate dataset sizes,
//     with u(S) = w(n_S) linking the two (see CardinalToSetUtility).
//
// Utilities are cheap to copy and share their call counter between copies.
// Evaluations must be pure apart from the counter, and may run concurrently.

#ifndef DSVAL_GAME_H_
#define DSVAL_GAME_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dsval {

// Raised when a utility returns NaN or an infinity.
class NonFiniteUtilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GameSpec {
 public:
  // Throws std::invalid_argument on an empty list, a negative size, or a
  // total beyond 2^53. Any player count is accepted; set utilities are
  // limited to Coalition::kMaxPlayers.
  explicit GameSpec(std::vector<int64_t> sizes);

  // Accepts "1,2,4" as well as one size per line; blank lines and '#'
  // comments are ignored.
  static GameSpec Parse(std::string_view text);
  static GameSpec FromFile(const std::string& path);
  // One size per line.
  std::string ToText() const;

  int num_players() const { return static_cast<int>(sizes_.size()); }
  int64_t size(int player) const;
  const std::vector<int64_t>& sizes() const { return sizes_; }
  // n_I, the aggregate size of the grand coalition.
  int64_t total() const { return total_; }

 private:
  std::vector<int64_t> sizes_;
  int64_t total_ = 0;
};

// A subset of [0, num_players) stored as a 64-bit mask.
class Coalition {
 public:
  static constexpr int kMaxPlayers = 64;

  explicit Coalition(int num_players, uint64_t mask = 0);
  static Coalition Empty(int num_players) { return Coalition(num_players); }
  static Coalition Grand(int num_players);

  // All player arguments must lie in [0, num_players); std::out_of_range
  // otherwise.
  Coalition Insert(int player) const;
  Coalition Remove(int player) const;
  bool Contains(int player) const;
  int Size() const;
  Coalition Complement() const;

  int num_players() const { return num_players_; }
  uint64_t mask() const { return mask_; }

  friend bool operator==(const Coalition& a, const Coalition& b) {
    return a.num_players_ == b.num_players_ && a.mask_ == b.mask_;
  }

 private:
  void CheckPlayer(int player) const;

  int num_players_;
  uint64_t mask_;
};

// Low bits set for the first `num_players` players.
uint64_t FullMask(int num_players);

// n_S = sum of sizes over members of `coalition`.
int64_t AggregateSize(const Coalition& coalition, const GameSpec& game);

// Invocation counter shared by all copies of a utility.
class CallCounter {
 public:
  CallCounter() : count_(std::make_shared<std::atomic<uint64_t>>(0)) {}
  void Increment() const { count_->fetch_add(1, std::memory_order_relaxed); }
  uint64_t value() const { return count_->load(std::memory_order_relaxed); }

 private:
  std::shared_ptr<std::atomic<uint64_t>> count_;
};

class SetUtility {
 public:
  using Fn = std::function<double(const Coalition&)>;

  explicit SetUtility(Fn fn);

  // Evaluates u(coalition), advancing the counter. Throws
  // NonFiniteUtilityError on a non-finite result.
  double operator()(const Coalition& coalition) const;

  uint64_t eval_count() const { return counter_.value(); }
  // Same function, new counter starting at zero.
  SetUtility WithFreshCounter() const { return SetUtility(fn_); }

 private:
  Fn fn_;
  CallCounter counter_;
};

class CardinalUtility {
 public:
  using Fn = std::function<double(double)>;

  explicit CardinalUtility(Fn fn);

  // Evaluates w(n) for n >= 0, advancing the counter. Throws
  // std::invalid_argument for negative or non-finite n and
  // NonFiniteUtilityError on a non-finite result.
  double operator()(double n) const;

  uint64_t eval_count() const { return counter_.value(); }
  CardinalUtility WithFreshCounter() const { return CardinalUtility(fn_); }

 private:
  Fn fn_;
  CallCounter counter_;
};

// u(S) = w(n_S). Each call of the returned utility evaluates w once.
SetUtility CardinalToSetUtility(const CardinalUtility& w, const GameSpec& game);

// u~(S) = u(S) - u(empty). u(empty) is evaluated once, here.
SetUtility NormalizeUtility(const SetUtility& u, int num_players);

// w~(n) = w(n) - w(0).
CardinalUtility NormalizeUtility(const CardinalUtility& w);

// Pointwise combinations, mostly for axiom checks.
SetUtility ScaleUtility(const SetUtility& u, double alpha);
SetUtility AddUtilities(const SetUtility& a, const SetUtility& b);
SetUtility OffsetUtility(const SetUtility& u, double offset);
CardinalUtility ScaleUtility(const CardinalUtility& w, double alpha);

// One value per player plus run metadata. budget_used counts
// marginal-contribution terms per player; a term costs two utility calls.
struct ValuationVector {
  std::string method;
  std::vector<double> values;
  int64_t budget_used = 0;
  std::optional<uint64_t> seed;
};

std::string ToJson(const ValuationVector& v, int indent = 2);
ValuationVector ValuationFromJson(std::string_view text);

}  // namespace dsval

#endif  // DSVAL_GAME_H_
