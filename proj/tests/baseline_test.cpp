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

#include "adtypes/baseline.hpp"

#include <gtest/gtest.h>

#include "adtypes/bench.hpp"
#include "oracles.hpp"

namespace adtypes {
namespace {

using testing::enumerate_matchings;
using testing::make_instance;

Instance random_int(int n, int k, std::uint64_t seed) {
  return gen_random({n, k, seed, ValueDistribution::kUniformInt, static_cast<DiscountFamily>(seed % 3)});
}

// Every greedy pick is the best remaining edge under EdgeOrder.
Matching global_greedy(const Instance& inst) {
  Matching m(inst.num_slots);
  std::vector<std::vector<char>> used(inst.types.size());
  for (std::size_t t = 0; t < inst.types.size(); ++t) used[t].assign(inst.types[t].values.size(), 0);
  while (true) {
    std::optional<std::pair<AdRef, int>> pick;
    double pick_value = 0.0;
    for (int j = 0; j < inst.num_slots; ++j) {
      if (m.at(j)) continue;
      for (int t = 0; t < inst.num_types(); ++t)
        for (int r = 0; r < inst.num_ads(t); ++r) {
          if (used[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)]) continue;
          const double v = edge_value(inst, {t, r}, j);
          if (!pick || EdgeOrder::before(v, j, {t, r}, pick_value, pick->second, pick->first)) {
            pick = std::pair{AdRef{t, r}, j};
            pick_value = v;
          }
        }
    }
    if (!pick) return m;
    m.assign(pick->second, pick->first);
    used[static_cast<std::size_t>(pick->first.type)][static_cast<std::size_t>(pick->first.rank)] = 1;
  }
}

TEST(GenericHungarianTest, MatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_int(1 + static_cast<int>(seed % 5), 1 + static_cast<int>(seed % 3), seed);
    const auto sol = solve_generic_hungarian(inst);
    ASSERT_EQ(sol.welfare, enumerate_matchings(inst)) << "seed " << seed;
    ASSERT_TRUE(certify(inst, sol).pass);
  }
}

TEST(GenericHungarianTest, ExampleOne) {
  const auto inst = make_instance(2, {{"video", {12}, {0.5, 1.0 / 3}}, {"link", {10}, {0.5, 0.25}}});
  EXPECT_EQ(solve_generic_hungarian(inst).welfare, 9.0);
}

TEST(BruteForceTest, MatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_int(1 + static_cast<int>(seed % 5), 1 + static_cast<int>(seed % 3), seed);
    const auto m = solve_bruteforce(inst);
    check_matching(inst, m);
    ASSERT_EQ(welfare(inst, m), enumerate_matchings(inst)) << "seed " << seed;
  }
}

TEST(BruteForceTest, GuardRefusesLargeInstances) {
  EXPECT_THROW(solve_bruteforce(random_int(9, 2, 1)), GuardRefusal);
  EXPECT_THROW(solve_bruteforce(random_int(3, 5, 1)), GuardRefusal);
  EXPECT_NO_THROW(solve_bruteforce(random_int(9, 2, 1), {9, 4}));
}

TEST(GreedyTest, TightInstance) {
  const auto inst = gen_greedy_tight(0.25);
  EXPECT_EQ(welfare(inst, solve_greedy(inst)), 1.0);
  EXPECT_EQ(welfare(inst, solve_bruteforce(inst)), 1.75);
}

TEST(GreedyTest, SingleTypeIsOptimal) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = random_int(1 + static_cast<int>(seed % 8), 1, seed);
    const auto m = solve_greedy(inst);
    for (int j = 0; j < inst.num_slots; ++j) ASSERT_EQ(m.at(j), (AdRef{0, j}));
    ASSERT_EQ(welfare(inst, m), welfare(inst, solve_bruteforce(inst)));
  }
}

TEST(GreedyTest, AtLeastHalfOfOptimal) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto inst = random_int(1 + static_cast<int>(seed % 8), 1 + static_cast<int>(seed % 4), seed);
    ASSERT_GE(2 * welfare(inst, solve_greedy(inst)), welfare(inst, solve_bruteforce(inst))) << "seed " << seed;
  }
}

TEST(GreedyTest, FrontierPassEqualsGlobalGreedy) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenConfig cfg{1 + static_cast<int>(seed % 9), 1 + static_cast<int>(seed % 4), seed};
    cfg.max_int_value = 3;
    cfg.discounts = static_cast<DiscountFamily>(seed % 3);
    const auto inst = gen_random(cfg);
    ASSERT_EQ(solve_greedy(inst), global_greedy(inst)) << "seed " << seed;
  }
}

TEST(AllocationCurveTest, SoleBidderWinsAtAnyPositiveBid) {
  const auto inst = make_instance(1, {{"a", {5}, {1}}});
  const auto curve = greedy_allocation_curve(inst, {0, 0});
  ASSERT_EQ(curve.breakpoints.size(), 1u);
  EXPECT_EQ(curve.breakpoints[0].threshold, 0.0);
  EXPECT_EQ(curve.breakpoints[0].quantity, 1.0);
  EXPECT_EQ(curve.quantity_above(1e-6), 1.0);
  EXPECT_EQ(curve.quantity_above(0.0), 0.0);
}

TEST(AllocationCurveTest, TightInstanceSecondType) {
  const auto inst = gen_greedy_tight(0.25);
  const auto curve = greedy_allocation_curve(inst, {1, 0});
  EXPECT_TRUE(curve.monotone());
  // Both slots give theta2 discount 1, so any positive bid wins quantity 1.
  EXPECT_EQ(curve.quantity_above(0.5), 1.0);
  EXPECT_EQ(curve.quantity_above(0.8), 1.0);
  EXPECT_EQ(curve.quantity_above(5.0), 1.0);
}

TEST(AllocationCurveTest, IntegralOfStepFunction) {
  AllocationCurve curve;
  curve.breakpoints = {{1.0, 0.25}, {3.0, 1.0}};
  EXPECT_DOUBLE_EQ(curve.integral(0.0, 4.0), 2 * 0.25 + 1.0);
  EXPECT_DOUBLE_EQ(curve.integral(2.0, 2.5), 0.125);
  EXPECT_TRUE(curve.monotone());
  curve.breakpoints.push_back({5.0, 0.5});
  EXPECT_FALSE(curve.monotone());
}

TEST(AllocationCurveTest, SweepAgreesWithDenseGrid) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_int(4, 3, seed);
    const AdRef ad{static_cast<int>(seed % 3), static_cast<int>(seed % 2)};
    const auto curve = greedy_allocation_curve(inst, ad);
    const auto profile = BidProfile::truthful(inst);
    for (int step = 1; step <= 400; ++step) {
      const double bid = step * 0.0625 + 0.01;
      ASSERT_EQ(curve.quantity_above(bid), allocated_quantity(profile, ad, bid, solve_greedy))
          << "seed " << seed << " bid " << bid;
    }
  }
}

TEST(AllocationCurveTest, GreedyCurvesAreMonotone) {
  int probes = 0;
  for (std::uint64_t seed = 1; probes < 1000; ++seed) {
    const auto inst = gen_random({1 + static_cast<int>(seed % 6), 1 + static_cast<int>(seed % 3), seed,
                                  ValueDistribution::kUniformInt, static_cast<DiscountFamily>(seed % 3)});
    for (int t = 0; t < inst.num_types() && probes < 1000; ++t) {
      const auto curve = greedy_allocation_curve(inst, {t, 0});
      ASSERT_TRUE(curve.monotone()) << "seed " << seed << " type " << t;
      ++probes;
    }
  }
}

TEST(AllocationCurveTest, ResolutionCapMarksCurveInexact) {
  const auto inst = random_int(5, 3, 9);
  EXPECT_TRUE(greedy_allocation_curve(inst, {0, 0}).exact);
  EXPECT_FALSE(greedy_allocation_curve(inst, {0, 0}, 3).exact);
}

}  // namespace
}  // namespace adtypes
