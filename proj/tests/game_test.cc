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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dsval/exact.h"
#include "dsval/parallel.h"

namespace dsval {
namespace {

TEST(CoalitionTest, InsertThenContains) {
  const Coalition c = Coalition::Empty(4).Insert(2);
  EXPECT_TRUE(c.Contains(2));
  EXPECT_FALSE(c.Contains(1));
  EXPECT_FALSE(c.Remove(2).Contains(2));
}

TEST(CoalitionTest, ComplementOfEmpty) {
  const Coalition c = Coalition::Empty(3).Complement();
  EXPECT_EQ(c.mask(), 0b111u);
  EXPECT_EQ(c, Coalition::Grand(3));
}

TEST(CoalitionTest, SizeIsPopcount) {
  EXPECT_EQ(Coalition(3, 0b101).Size(), 2);
  EXPECT_EQ(Coalition::Grand(64).Size(), 64);
}

TEST(CoalitionTest, OutOfRangePlayersThrow) {
  const Coalition c = Coalition::Empty(3);
  EXPECT_THROW(c.Insert(3), std::out_of_range);
  EXPECT_THROW(c.Insert(-1), std::out_of_range);
  EXPECT_THROW(c.Contains(5), std::out_of_range);
  EXPECT_THROW(Coalition(65), std::invalid_argument);
  EXPECT_THROW(Coalition(3, 0b1000), std::out_of_range);
}

TEST(CoalitionTest, SixtyFourPlayerCapacity) {
  const Coalition c = Coalition::Empty(64).Insert(63).Insert(0);
  EXPECT_TRUE(c.Contains(63));
  EXPECT_EQ(c.Complement().Size(), 62);
}

TEST(AggregateSizeTest, Examples) {
  const GameSpec g({1, 2, 4});
  EXPECT_EQ(AggregateSize(Coalition(3, 0b101), g), 5);
  EXPECT_EQ(AggregateSize(Coalition::Empty(3), g), 0);
  EXPECT_EQ(AggregateSize(Coalition::Grand(3), GameSpec({10, 10, 10})), 30);
}

TEST(AggregateSizeTest, AdditiveOverDisjointCoalitions) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int64_t> size(0, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int64_t> sizes(12);
    for (auto& n : sizes) n = size(gen);
    const GameSpec g(sizes);
    const uint64_t a = gen() & FullMask(12);
    const uint64_t b = gen() & FullMask(12) & ~a;
    EXPECT_EQ(AggregateSize(Coalition(12, a | b), g),
              AggregateSize(Coalition(12, a), g) + AggregateSize(Coalition(12, b), g));
  }
}

TEST(GameSpecTest, ParsesInlineAndLineFormats) {
  EXPECT_EQ(GameSpec::Parse("1,2,4").sizes(), (std::vector<int64_t>{1, 2, 4}));
  EXPECT_EQ(GameSpec::Parse("# sizes\n3\n\n5  # five\n").sizes(),
            (std::vector<int64_t>{3, 5}));
  const GameSpec g({7, 0, 9});
  EXPECT_EQ(GameSpec::Parse(g.ToText()).sizes(), g.sizes());
}

TEST(GameSpecTest, RejectsBadInput) {
  EXPECT_THROW(GameSpec({}), std::invalid_argument);
  EXPECT_THROW(GameSpec({1, -2}), std::invalid_argument);
  EXPECT_THROW(GameSpec::Parse("1,x"), std::invalid_argument);
  EXPECT_THROW(GameSpec::Parse(""), std::invalid_argument);
  EXPECT_THROW(GameSpec::FromFile("/nonexistent/sizes.txt"), std::runtime_error);
}

TEST(GameSpecTest, ExactTotalsUpTo2Pow53) {
  const int64_t half = int64_t{1} << 52;
  const GameSpec g({half, half});
  EXPECT_EQ(g.total(), int64_t{1} << 53);
  EXPECT_THROW(GameSpec({half, half, 1}), std::invalid_argument);
}

TEST(GameSpecTest, ReadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "dsval_sizes_test.txt";
  std::ofstream(path) << "4\n8\n15\n";
  EXPECT_EQ(GameSpec::FromFile(path.string()).sizes(), (std::vector<int64_t>{4, 8, 15}));
  std::filesystem::remove(path);
}

TEST(GameSpecTest, SizeAccessorChecksRange) {
  const GameSpec g({1, 2});
  EXPECT_EQ(g.size(1), 2);
  EXPECT_THROW(g.size(2), std::out_of_range);
}

TEST(CardinalToSetUtilityTest, Examples) {
  const CardinalUtility square([](double n) { return n * n; });
  const SetUtility u = CardinalToSetUtility(square, GameSpec({1, 2}));
  EXPECT_EQ(u(Coalition::Grand(2)), 9.0);
  EXPECT_EQ(u(Coalition::Empty(2)), square(0.0));

  const CardinalUtility root([](double n) { return std::sqrt(n); });
  EXPECT_EQ(CardinalToSetUtility(root, GameSpec({4}))(Coalition::Grand(1)), 2.0);
}

TEST(CardinalToSetUtilityTest, AdvancesCardinalCounter) {
  const CardinalUtility w([](double n) { return n; });
  const SetUtility u = CardinalToSetUtility(w, GameSpec({1, 2}));
  u(Coalition::Grand(2));
  u(Coalition::Empty(2));
  EXPECT_EQ(w.eval_count(), 2u);
  EXPECT_EQ(u.eval_count(), 2u);
}

TEST(NormalizeUtilityTest, EmptyCoalitionMapsToZero) {
  const CardinalUtility w([](double n) { return n - 5.0; });
  const SetUtility u = NormalizeUtility(CardinalToSetUtility(w, GameSpec({1, 2})), 2);
  EXPECT_EQ(u(Coalition::Empty(2)), 0.0);
  EXPECT_EQ(u(Coalition::Grand(2)), 3.0);
  EXPECT_EQ(NormalizeUtility(w)(0.0), 0.0);
}

TEST(NormalizeUtilityTest, ConstantBecomesZero) {
  const SetUtility u = NormalizeUtility(SetUtility([](const Coalition&) { return 4.5; }), 3);
  for (uint64_t m = 0; m < 8; ++m) EXPECT_EQ(u(Coalition(3, m)), 0.0);
}

TEST(NormalizeUtilityTest, ShapleyValuesUnchanged) {
  const GameSpec g({1, 2, 4});
  const SetUtility base = CardinalToSetUtility(
      CardinalUtility([](double n) { return std::sqrt(n); }), g);
  const auto phi = ExactShapleySubsets(base, g).values;
  const auto shifted = ExactShapleySubsets(OffsetUtility(base, -5.0), g).values;
  const auto normalized =
      ExactShapleySubsets(NormalizeUtility(OffsetUtility(base, -5.0), 3), g).values;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(phi[i], shifted[i], 1e-12);
    EXPECT_NEAR(phi[i], normalized[i], 1e-12);
  }
}

TEST(UtilityContractTest, NonFiniteValuesThrow) {
  const CardinalUtility w([](double n) { return std::log(n - 1.0); });
  EXPECT_THROW(w(0.5), NonFiniteUtilityError);
  EXPECT_THROW(w(-1.0), std::invalid_argument);
  EXPECT_THROW(w(std::numeric_limits<double>::infinity()), std::invalid_argument);
  const SetUtility u([](const Coalition&) { return std::nan(""); });
  EXPECT_THROW(u(Coalition::Empty(1)), NonFiniteUtilityError);
}

TEST(UtilityContractTest, CounterIsExactUnderConcurrency) {
  const SetUtility u([](const Coalition& c) { return static_cast<double>(c.Size()); });
  SetMaxThreads(4);
  ParallelFor(10000, [&](std::size_t k) { u(Coalition(8, k % 256)); });
  SetMaxThreads(1);
  EXPECT_EQ(u.eval_count(), 10000u);
  EXPECT_EQ(u.WithFreshCounter().eval_count(), 0u);
}

TEST(ValuationVectorTest, JsonRoundTrip) {
  ValuationVector v{"mc", {0.1, -2.5, 1e-300}, 40, 12345678901234567ULL};
  const ValuationVector back = ValuationFromJson(ToJson(v));
  EXPECT_EQ(back.method, v.method);
  EXPECT_EQ(back.values, v.values);
  EXPECT_EQ(back.budget_used, v.budget_used);
  EXPECT_EQ(back.seed, v.seed);

  v.seed.reset();
  EXPECT_NE(ToJson(v).find("null"), std::string::npos);
  EXPECT_FALSE(ValuationFromJson(ToJson(v)).seed.has_value());
}

}  // namespace
}  // namespace dsval
