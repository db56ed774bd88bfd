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

#include "adtypes/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

namespace adtypes {
namespace {

bool same_instance(const Instance& a, const Instance& b) {
  if (a.num_slots != b.num_slots || a.types.size() != b.types.size()) return false;
  for (std::size_t t = 0; t < a.types.size(); ++t)
    if (a.types[t].values != b.types[t].values || a.types[t].discounts != b.types[t].discounts) return false;
  return true;
}

TEST(GenRandomTest, DeterministicPerSeed) {
  for (auto v : {ValueDistribution::kUniformInt, ValueDistribution::kUniformReal, ValueDistribution::kPareto}) {
    EXPECT_TRUE(same_instance(gen_random({6, 3, 1, v}), gen_random({6, 3, 1, v})));
    EXPECT_FALSE(same_instance(gen_random({6, 3, 1, v}), gen_random({6, 3, 2, v})));
  }
}

TEST(GenRandomTest, GeometricDiscountsAreValid) {
  const auto inst = gen_random({5, 2, 1, ValueDistribution::kUniformInt, DiscountFamily::kGeometric});
  EXPECT_TRUE(validate_instance(inst).ok());
  for (const auto& spec : inst.types) {
    EXPECT_EQ(spec.discounts.front(), 1.0);
    EXPECT_TRUE(std::is_sorted(spec.discounts.rbegin(), spec.discounts.rend()));
  }
}

TEST(GenRandomTest, RejectsEmptyShapes) {
  EXPECT_THROW(gen_random({0, 2, 1}), ValidationError);
  EXPECT_THROW(gen_random({2, 0, 1}), ValidationError);
}

TEST(GenRandomTest, GapInstancesRespectPositiveAdBudget) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = gen_random_gap({5, 3, seed}, 3, 4);
    ASSERT_TRUE(validate_instance(inst).ok());
    int positive = 0;
    for (const auto& spec : inst.types)
      positive += static_cast<int>(std::count_if(spec.values.begin(), spec.values.end(), [](double v) { return v > 0; }));
    ASSERT_LE(positive, 12);
  }
}

TEST(GreedyTightTest, RatiosApproachOneHalf) {
  double previous = 1.0;
  for (double eps : {0.5, 0.25, 0.125}) {
    const auto inst = gen_greedy_tight(eps);
    const double greedy = welfare(inst, solve_greedy(inst));
    const double optimal = welfare(inst, solve_bruteforce(inst));
    EXPECT_EQ(optimal, 2 - eps);
    EXPECT_EQ(greedy, 1.0);
    EXPECT_EQ(greedy / optimal, 1 / (2 - eps));
    EXPECT_LT(greedy / optimal, previous);
    previous = greedy / optimal;
  }
}

TEST(GreedyTightTest, RejectsEpsilonOutsideUnitInterval) {
  EXPECT_THROW(gen_greedy_tight(0.0), ValidationError);
  EXPECT_THROW(gen_greedy_tight(1.0), ValidationError);
}

TEST(AssignmentReductionTest, TwoByTwo) {
  const auto r = assignment_to_adtypes({{3, 1}, {1, 2}});
  EXPECT_EQ(solve_adtypes(r.instance).welfare - r.offset, 5.0);
}

TEST(AssignmentReductionTest, AllEqualWeights) {
  const auto r = assignment_to_adtypes(std::vector<std::vector<double>>(4, std::vector<double>(4, 3.0)));
  EXPECT_EQ(solve_adtypes(r.instance).welfare - r.offset, 12.0);
}

TEST(AssignmentReductionTest, RandomMatricesAgainstPermutations) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto w = gen_assignment_matrix(6, seed);
    const auto r = assignment_to_adtypes(w);
    ASSERT_TRUE(validate_instance(r.instance).ok());
    const auto sol = solve_adtypes(r.instance);
    ASSERT_EQ(sol.welfare - r.offset, testing::best_assignment(w)) << "seed " << seed;
    // The matching itself, read back on the original weights, is optimal.
    double recovered = 0.0;
    for (int j = 0; j < 6; ++j) {
      const auto& ad = sol.matching.at(j);
      ASSERT_TRUE(ad.has_value());
      ASSERT_EQ(ad->rank, 0);
      recovered += w[static_cast<std::size_t>(ad->type)][static_cast<std::size_t>(j)];
    }
    ASSERT_EQ(recovered, testing::best_assignment(w));
  }
}

TEST(AssignmentReductionTest, RejectsBadMatrices) {
  EXPECT_THROW(assignment_to_adtypes({{1, 0}, {1, 1}}), ValidationError);
  EXPECT_THROW(assignment_to_adtypes({{1, 2}}), ValidationError);
  EXPECT_THROW(assignment_to_adtypes({}), ValidationError);
}

TEST(BenchScalingTest, CsvShapeAndConsistentWelfare) {
  BenchOptions options;
  options.reps = 2;
  options.instances = 2;
  options.min_rep_ms = 0.0;
  const auto report = bench_scaling({{10, 2}, {20, 3}}, options);
  ASSERT_EQ(report.rows.size(), 4u);
  for (std::size_t i = 0; i < report.rows.size(); i += 2) {
    EXPECT_EQ(report.rows[i].solver, "adtypes");
    EXPECT_EQ(report.rows[i + 1].solver, "generic");
    EXPECT_EQ(report.rows[i].welfare, report.rows[i + 1].welfare);
    EXPECT_GT(report.rows[i].median_ms, 0.0);
  }
  const auto csv = report.to_csv();
  EXPECT_EQ(csv.rfind("n,k,solver,median_ms,welfare\n10,2,adtypes,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(BenchScalingTest, WelfareDoesNotDependOnRepetitions) {
  BenchOptions one;
  one.reps = 1;
  one.min_rep_ms = 0.0;
  BenchOptions five = one;
  five.reps = 5;
  const auto a = bench_scaling({{15, 4}}, one);
  const auto b = bench_scaling({{15, 4}}, five);
  EXPECT_EQ(a.rows[0].welfare, b.rows[0].welfare);
  EXPECT_EQ(a.rows[1].welfare, b.rows[1].welfare);
}

}  // namespace
}  // namespace adtypes
