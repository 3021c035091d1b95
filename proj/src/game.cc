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

#include "dsval/game.h"

#include <bit>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace dsval {
namespace {

constexpr int64_t kMaxExactTotal = int64_t{1} << 53;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

GameSpec::GameSpec(std::vector<int64_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) {
    throw std::invalid_argument("a game needs at least one player");
  }
  for (int64_t n : sizes_) {
    if (n < 0) throw std::invalid_argument("dataset sizes must be >= 0");
    if (n > kMaxExactTotal - total_) {
      throw std::invalid_argument("aggregate size exceeds 2^53");
    }
    total_ += n;
  }
}

GameSpec GameSpec::Parse(std::string_view text) {
  std::vector<int64_t> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(",\n", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    if (auto hash = token.find('#'); hash != std::string_view::npos) {
      token = token.substr(0, hash);
    }
    token = Trim(token);
    if (!token.empty()) {
      int64_t value = 0;
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::invalid_argument("bad dataset size '" + std::string(token) +
                                    "'");
      }
      sizes.push_back(value);
    }
    pos = end + 1;
  }
  return GameSpec(std::move(sizes));
}

GameSpec GameSpec::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sizes file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::string GameSpec::ToText() const {
  std::string out;
  for (int64_t n : sizes_) out += std::to_string(n) + "\n";
  return out;
}

int64_t GameSpec::size(int player) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("player index out of range");
  }
  return sizes_[player];
}

uint64_t FullMask(int num_players) {
  return num_players >= 64 ? ~uint64_t{0}
                           : (uint64_t{1} << num_players) - 1;
}

Coalition::Coalition(int num_players, uint64_t mask)
    : num_players_(num_players), mask_(mask) {
  if (num_players < 0 || num_players > kMaxPlayers) {
    throw std::invalid_argument("coalition capacity is 64 players");
  }
  if ((mask & ~FullMask(num_players)) != 0) {
    throw std::out_of_range("coalition member outside [0, I)");
  }
}

Coalition Coalition::Grand(int num_players) {
  return Coalition(num_players, FullMask(num_players));
}

void Coalition::CheckPlayer(int player) const {
  if (player < 0 || player >= num_players_) {
    throw std::out_of_range("player index out of range");
  }
}

Coalition Coalition::Insert(int player) const {
  CheckPlayer(player);
  return Coalition(num_players_, mask_ | (uint64_t{1} << player));
}

Coalition Coalition::Remove(int player) const {
  CheckPlayer(player);
  return Coalition(num_players_, mask_ & ~(uint64_t{1} << player));
}

bool Coalition::Contains(int player) const {
  CheckPlayer(player);
  return (mask_ >> player) & 1;
}

int Coalition::Size() const { return std::popcount(mask_); }

Coalition Coalition::Complement() const {
  return Coalition(num_players_, ~mask_ & FullMask(num_players_));
}

int64_t AggregateSize(const Coalition& coalition, const GameSpec& game) {
  if (coalition.num_players() != game.num_players()) {
    throw std::invalid_argument("coalition and game disagree on I");
  }
  int64_t total = 0;
  for (uint64_t m = coalition.mask(); m != 0; m &= m - 1) {
    total += game.sizes()[std::countr_zero(m)];
  }
  return total;
}

SetUtility::SetUtility(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw std::invalid_argument("empty utility function");
}

double SetUtility::operator()(const Coalition& coalition) const {
  counter_.Increment();
  const double value = fn_(coalition);
  if (!std::isfinite(value)) {
    throw NonFiniteUtilityError("set utility returned a non-finite value");
  }
  return value;
}

CardinalUtility::CardinalUtility(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw std::invalid_argument("empty utility function");
}

double CardinalUtility::operator()(double n) const {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cardinal utility evaluated outside [0, inf)");
  }
  counter_.Increment();
  const double value = fn_(n);
  if (!std::isfinite(value)) {
    throw NonFiniteUtilityError("cardinal utility returned a non-finite value "
                                "at n = " + std::to_string(n));
  }
  return value;
}

SetUtility CardinalToSetUtility(const CardinalUtility& w, const GameSpec& game) {
  return SetUtility([w, game](const Coalition& s) {
    return w(static_cast<double>(AggregateSize(s, game)));
  });
}

SetUtility NormalizeUtility(const SetUtility& u, int num_players) {
  const double empty = u(Coalition::Empty(num_players));
  return SetUtility([u, empty](const Coalition& s) {
    return s.mask() == 0 ? 0.0 : u(s) - empty;
  });
}

CardinalUtility NormalizeUtility(const CardinalUtility& w) {
  const double at_zero = w(0.0);
  return CardinalUtility(
      [w, at_zero](double n) { return n == 0.0 ? 0.0 : w(n) - at_zero; });
}

SetUtility ScaleUtility(const SetUtility& u, double alpha) {
  return SetUtility([u, alpha](const Coalition& s) { return alpha * u(s); });
}

SetUtility AddUtilities(const SetUtility& a, const SetUtility& b) {
  return SetUtility([a, b](const Coalition& s) { return a(s) + b(s); });
}

SetUtility OffsetUtility(const SetUtility& u, double offset) {
  return SetUtility([u, offset](const Coalition& s) { return u(s) + offset; });
}

CardinalUtility ScaleUtility(const CardinalUtility& w, double alpha) {
  return CardinalUtility([w, alpha](double n) { return alpha * w(n); });
}

std::string ToJson(const ValuationVector& v, int indent) {
  nlohmann::ordered_json j;
  j["method"] = v.method;
  j["values"] = v.values;
  j["budget_used"] = v.budget_used;
  if (v.seed) {
    j["seed"] = *v.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j.dump(indent);
}

ValuationVector ValuationFromJson(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ValuationVector v;
  v.method = j.value("method", std::string());
  v.values = j.at("values").get<std::vector<double>>();
  v.budget_used = j.at("budget_used").get<int64_t>();
  if (j.contains("seed") && !j.at("seed").is_null()) {
    v.seed = j.at("seed").get<uint64_t>();
  }
  return v;
}

}  // namespace dsval
