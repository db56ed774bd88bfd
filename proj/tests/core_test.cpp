// Copyright 2026 The adtypes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adtypes/core.hpp"

#include <gtest/gtest.h>

#include "adtypes/bench.hpp"
#include "adtypes/perturbed.hpp"
#include "oracles.hpp"

namespace adtypes {
namespace {

using testing::make_instance;

bool mentions(const std::vector<std::string>& lines, const std::string& what) {
  return std::any_of(lines.begin(), lines.end(),
                     [&](const std::string& s) { return s.find(what) != std::string::npos; });
}

TEST(ValidateTest, AcceptsWellFormedInstance) {
  const auto inst = make_instance(2, {{"video", {12}, {0.5, 1.0 / 3}}, {"link", {10}, {0.5, 0.25}}});
  const auto report = validate_instance(inst);
  EXPECT_TRUE(report.ok()) << report.to_string();
  EXPECT_TRUE(report.warnings.empty());
}

TEST(ValidateTest, RejectsIncreasingValues) {
  Instance inst{2, {{"a", {1, 5}, {1, 0.5}}}, std::nullopt};
  const auto report = validate_instance(inst);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(mentions(report.violations, "values not non-increasing"));
}

TEST(ValidateTest, RejectsIncreasingDiscounts) {
  Instance inst{2, {{"a", {5, 1}, {0.5, 1}}}, std::nullopt};
  const auto report = validate_instance(inst);
  EXPECT_TRUE(mentions(report.violations, "discounts not non-increasing"));
}

TEST(ValidateTest, RejectsNonSquareGapMatrix) {
  Instance inst{2, {{"a", {1, 1}, {1, 1}}, {"b", {1, 1}, {1, 1}}}, GapMatrix{{0, 1}}};
  EXPECT_TRUE(mentions(validate_instance(inst).violations, "gap matrix not k x k"));
}

TEST(ValidateTest, RejectsNegativeGapAndWrongLengths) {
  Instance inst{2, {{"a", {1}, {1, 1, 1}}}, GapMatrix{{-1}}};
  const auto report = validate_instance(inst);
  EXPECT_TRUE(mentions(report.violations, "negative entry"));
  EXPECT_TRUE(mentions(report.violations, "discounts, expected 2"));
  EXPECT_TRUE(mentions(report.violations, "values, expected 2"));
  EXPECT_TRUE(validate_instance(inst, {.require_normalized = false}).violations.size() == 2);
}

TEST(ValidateTest, DiscountAboveOneOnlyWarns) {
  Instance inst{1, {{"a", {1}, {1.5}}}, std::nullopt};
  const auto report = validate_instance(inst);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(mentions(report.warnings, "discount above 1"));
}

TEST(ValidateTest, RequireValidThrows) {
  Instance inst{0, {}, std::nullopt};
  EXPECT_THROW(require_valid(inst), ValidationError);
}

TEST(ValidateTest, GapRulesRejectedByNameOfSolver) {
  Instance inst{2, {{"a", {1, 1}, {1, 1}}}, GapMatrix{{1}}};
  try {
    require_no_gap_rules(inst, "solve_adtypes");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("use gapdp"), std::string::npos);
  }
  inst.gap = GapMatrix{{0}};
  EXPECT_FALSE(inst.has_gap_rules());
  EXPECT_NO_THROW(require_no_gap_rules(inst, "solve_adtypes"));
}

TEST(NormalizeTest, PadsAndTruncates) {
  Instance inst{3, {{"a", {4}, {1, 1, 1}}, {"b", {9, 8, 7, 6}, {1, 1, 1}}}, std::nullopt};
  const auto norm = normalize_instance(inst);
  EXPECT_EQ(norm.types[0].values, (std::vector<double>{4, 0, 0}));
  EXPECT_EQ(norm.types[1].values, (std::vector<double>{9, 8, 7}));
  EXPECT_TRUE(validate_instance(norm).ok());
}

TEST(EdgeValueTest, ProductOfDiscountAndValue) {
  const auto inst = make_instance(2, {{"link", {10}, {0.5, 0.25}}});
  EXPECT_EQ(edge_value(inst, {0, 0}, 1), 2.5);
  EXPECT_EQ(edge_value(inst, {0, 1}, 0), 0.0);
  EXPECT_THROW(edge_value(inst, {0, 2}, 0), std::out_of_range);
  EXPECT_THROW(edge_value(inst, {1, 0}, 0), std::out_of_range);
  EXPECT_THROW(edge_value(inst, {0, 0}, 2), std::out_of_range);
}

TEST(EdgeOrderTest, ValueThenSlotThenTypeThenRank) {
  EXPECT_TRUE(EdgeOrder::before(2, 5, {3, 3}, 1, 0, {0, 0}));
  EXPECT_TRUE(EdgeOrder::before(1, 0, {3, 3}, 1, 1, {0, 0}));
  EXPECT_TRUE(EdgeOrder::before(1, 0, {0, 3}, 1, 0, {1, 0}));
  EXPECT_TRUE(EdgeOrder::before(1, 0, {0, 0}, 1, 0, {0, 1}));
  EXPECT_FALSE(EdgeOrder::before(1, 0, {0, 0}, 1, 0, {0, 0}));
}

TEST(MatchingTest, WelfareOfExampleAllocations) {
  const auto inst = make_instance(2, {{"video", {12}, {0.5, 1.0 / 3}}, {"link", {10}, {0.5, 0.25}}});
  Matching best(2);
  best.assign(0, {1, 0});
  best.assign(1, {0, 0});
  Matching swapped(2);
  swapped.assign(0, {0, 0});
  swapped.assign(1, {1, 0});
  EXPECT_EQ(welfare(inst, best), 9.0);
  EXPECT_EQ(welfare(inst, swapped), 8.5);
  EXPECT_EQ(best.slot_of({0, 0}), 1);
  EXPECT_EQ(best.size(), 2);
}

TEST(MatchingTest, RejectsReusedAd) {
  const auto inst = make_instance(2, {{"a", {3, 1}, {1, 1}}});
  Matching m(2);
  m.assign(0, {0, 0});
  m.assign(1, {0, 0});
  EXPECT_THROW(check_matching(inst, m), ValidationError);
  EXPECT_THROW(check_matching(inst, Matching(3)), ValidationError);
}

TEST(MatchingTest, RankOrderWithinType) {
  Matching m(3);
  m.assign(0, {0, 0});
  m.assign(2, {0, 1});
  EXPECT_TRUE(within_type_rank_order(m, 1));
  m.assign(0, {0, 1});
  m.assign(2, {0, 0});
  EXPECT_FALSE(within_type_rank_order(m, 1));
}

TEST(PerturbedTest, LexicographicOrder) {
  EXPECT_LT((Perturbed{1, 9, 9}), (Perturbed{2, 0, 0}));
  EXPECT_LT((Perturbed{1, 1, 9}), (Perturbed{1, 2, 0}));
  EXPECT_LT((Perturbed{1, 1, 1}), (Perturbed{1, 1, 2}));
  EXPECT_EQ((Perturbed{1, 2, 3} + Perturbed{1, 1, 1} - Perturbed{2, 3, 4}), (Perturbed{}));
}

TEST(PerturbedTest, BreaksValueTiesTowardBetterSlotAndRank) {
  const auto inst = make_instance(3, {{"a", {4, 4, 4}, {1, 1, 1}}});
  EXPECT_GT(perturbed_edge(inst, {0, 0}, 0), perturbed_edge(inst, {0, 0}, 1));
  EXPECT_GT(perturbed_edge(inst, {0, 0}, 1), perturbed_edge(inst, {0, 1}, 1));
  EXPECT_EQ(perturbed_edge(inst, {0, 2}, 1).base, 4.0);
}

TEST(GeneratorTest, GeneratedInstancesAreValid) {
  for (auto d : {DiscountFamily::kGeometric, DiscountFamily::kLinear, DiscountFamily::kStep})
    for (auto v : {ValueDistribution::kUniformInt, ValueDistribution::kUniformReal, ValueDistribution::kPareto})
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = gen_random({7, 3, seed, v, d});
        const auto report = validate_instance(inst);
        ASSERT_TRUE(report.ok()) << report.to_string();
        ASSERT_TRUE(report.warnings.empty());
      }
}

}  // namespace
}  // namespace adtypes
