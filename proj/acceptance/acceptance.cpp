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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adtypes/adtypes.hpp"
#include "adtypes/io.hpp"
#include "graphs.hpp"

namespace adtypes::acceptance {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Integer values up to 16, n <= 8, k <= 4, every discount family.
std::vector<Instance> oracle_instances(int count) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    const auto seed = static_cast<std::uint64_t>(1000 + i);
    GenConfig cfg{1 + i % 8, 1 + (i / 8) % 4, seed};
    cfg.max_int_value = 16;
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    out.push_back(gen_random(cfg));
  }
  return out;
}

double reserve_of(const ReserveVector& r, BidderId b) {
  return r[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
}

ReserveVector random_reserves(const Instance& inst, std::uint64_t seed) {
  ReserveVector r = zero_reserves(inst);
  std::mt19937_64 rng(seed);
  for (auto& row : r)
    for (auto& x : row) x = static_cast<double>(rng() % 9);
  return r;
}

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto instances = oracle_instances(1200);
  int mismatches = 0;
  for (const auto& inst : instances) {
    const double a = welfare(inst, solve_adtypes(inst).matching);
    const double g = welfare(inst, solve_generic_hungarian(inst).matching);
    const double b = welfare(inst, solve_bruteforce(inst));
    if (a != g || a != b) ++mismatches;
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 60.0,
          fmt("%zu instances, %d mismatches, %.2f s (limit 60 s)", instances.size(), mismatches, secs)};
}

Outcome example_one() {
  Instance inst;
  inst.num_slots = 2;
  inst.types.push_back({"video", {12}, {0.5, 1.0 / 3}});
  inst.types.push_back({"link", {10}, {0.5, 0.25}});
  inst = normalize_instance(std::move(inst));
  const auto sol = solve_adtypes(inst);
  Matching swap(2);
  swap.assign(0, {0, 0});
  swap.assign(1, {1, 0});
  const bool link_first = sol.matching.at(0) == AdRef{1, 0};
  const bool video_second = sol.matching.at(1) == AdRef{0, 0};
  const double w = welfare(inst, sol.matching);
  const double w_swap = welfare(inst, swap);
  return {link_first && video_second && w == 9.0 && w_swap == 8.5,
          fmt("link->slot %d, video->slot %d, welfare %.17g vs swap %.17g", *sol.matching.slot_of({1, 0}) + 1,
              *sol.matching.slot_of({0, 0}) + 1, w, w_swap)};
}

Outcome vcg_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  constexpr int kCount = 600;
  double worst = 0.0;
  int non_minimal = 0;
  for (int i = 0; i < kCount; ++i) {
    GenConfig cfg{1 + i % 20, 1 + (i / 20) % 5, static_cast<std::uint64_t>(5000 + i)};
    cfg.values = static_cast<ValueDistribution>(i % 3);
    cfg.discounts = static_cast<DiscountFamily>((i / 3) % 3);
    const auto inst = gen_random(cfg);
    const auto sol = solve_adtypes(inst);
    const auto fast = vcg_prices_fast(inst, sol);
    const auto naive = vcg_prices_naive(inst, sol.matching);
    for (std::size_t j = 0; j < naive.size(); ++j) worst = std::max(worst, std::abs(fast.p[j] - naive[j]));
    non_minimal += static_cast<int>(non_minimal_slots(inst, sol.matching, fast).size());
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && non_minimal == 0 && secs < 120.0,
          fmt("%d instances, max |fast - naive| %.3g (tol 1e-9), %d non-minimal slots, %.2f s (limit 120 s)", kCount,
              worst, non_minimal, secs)};
}

Outcome ic_audit() {
  constexpr int kCount = 200;
  constexpr int kDeviations = 50;
  long tried = 0;
  int vcg_profitable = 0;
  int reserve_profitable = 0;
  for (int i = 0; i < kCount; ++i) {
    const auto seed = static_cast<std::uint64_t>(9000 + i);
    GenConfig cfg{1 + i % 5, 1 + (i / 5) % 3, seed};
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    const auto inst = gen_random(cfg);
    const auto vcg = vcg_mechanism();
    const auto reserve = reserve_mechanism(random_reserves(inst, seed));
    for (const auto b : BidProfile::truthful(inst).bidders()) {
      const auto deviations = sample_deviations(inst, b, kDeviations, seed * 131 + static_cast<std::uint64_t>(b.type * 17 + b.rank));
      tried += static_cast<long>(deviations.size());
      vcg_profitable += static_cast<int>(test_ic_deviation(inst, vcg, b, deviations, 1e-9).profitable.size());
      reserve_profitable += static_cast<int>(test_ic_deviation(inst, reserve, b, deviations, 1e-9).profitable.size());
    }
  }
  return {vcg_profitable == 0 && reserve_profitable == 0,
          fmt("%d instances, %ld deviations per mechanism, profitable: vcg %d, reserve %d", kCount, tried,
              vcg_profitable, reserve_profitable)};
}

Outcome reserve_pricing() {
  constexpr int kCount = 300;
  double worst = 0.0;
  long priced = 0;
  for (int i = 0; i < kCount; ++i) {
    const auto seed = static_cast<std::uint64_t>(12000 + i);
    GenConfig cfg{1 + i % 6, 1 + (i / 6) % 3, seed};
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    const auto inst = gen_random(cfg);
    const auto reserves = random_reserves(inst, seed);
    const auto out = price_with_reserves(inst, reserves);
    auto eligible = BidProfile::truthful(inst);
    for (const auto b : eligible.bidders())
      if (eligible.bid(b) < reserve_of(reserves, b)) eligible.set_active(b, false);
    for (const auto b : eligible.bidders()) {
      const double oracle = out.assignment.slot_of(b)
                                ? myerson_changepoint_price(eligible, b, reserve_of(reserves, b), AllocatorKind::kExact)
                                : 0.0;
      worst = std::max(worst, std::abs(out.payment(b) - oracle));
      ++priced;
    }
  }

  // Zero reserves against VCG on integer-valued fixtures.
  std::vector<Instance> fixtures;
  for (const char* name : {"example1.json", "two_bidders.json"})
    fixtures.push_back(instance_from_json(read_json_file(std::string(ADTYPES_FIXTURE_DIR) + "/" + name)));
  for (int i = 0; i < 200; ++i) {
    GenConfig cfg{1 + i % 8, 1 + (i / 8) % 4, static_cast<std::uint64_t>(15000 + i)};
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    fixtures.push_back(gen_random(cfg));
  }
  int vcg_mismatches = 0;
  for (const auto& inst : fixtures) {
    const auto profile = BidProfile::truthful(inst);
    const auto zero = price_with_reserves(inst, zero_reserves(inst));
    const auto vcg = run_vcg(profile);
    bool same = zero.assignment == vcg.assignment;
    for (const auto b : profile.bidders()) same = same && zero.payment(b) == vcg.payment(b);
    if (!same) ++vcg_mismatches;
  }
  return {worst <= 1e-9 && vcg_mismatches == 0,
          fmt("%d instances, %ld payments, max |reserve - oracle| %.3g (tol 1e-9); zero reserves vs vcg: %zu fixtures, "
              "%d mismatches",
              kCount, priced, worst, fixtures.size(), vcg_mismatches)};
}

Outcome greedy_guarantee() {
  const auto instances = oracle_instances(1200);
  double worst_ratio = 1.0;
  int below = 0;
  for (const auto& inst : instances) {
    const double opt = welfare(inst, solve_adtypes(inst).matching);
    const double greedy = welfare(inst, solve_greedy(inst));
    if (greedy < 0.5 * opt) ++below;
    if (opt > 0) worst_ratio = std::min(worst_ratio, greedy / opt);
  }
  bool tight = true;
  std::ostringstream ratios;
  for (double eps : {0.5, 0.25, 0.125}) {
    const auto inst = gen_greedy_tight(eps);
    const double ratio = welfare(inst, solve_greedy(inst)) / welfare(inst, solve_adtypes(inst).matching);
    tight = tight && ratio == 1 / (2 - eps);
    ratios << ' ' << ratio;
  }
  return {below == 0 && tight,
          fmt("%zu instances, %d below half, worst ratio %.4f; tight family ratios%s", instances.size(), below,
              worst_ratio, ratios.str().c_str())};
}

Outcome gap_dp() {
  constexpr int kCount = 300;
  int mismatches = 0;
  for (int i = 0; i < kCount; ++i) {
    GenConfig cfg{1 + i % 5, 1 + (i / 5) % 3, static_cast<std::uint64_t>(20000 + i)};
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    const auto inst = gen_random_gap(cfg, 1 + i % 4, 4);
    if (solve_gap_dp(inst).welfare != welfare(inst, brute_force_gap(inst))) ++mismatches;
  }

  long graphs = 0;
  int mis_mismatches = 0;
  const auto check = [&](const Adjacency& adj) {
    const auto g = to_graph(adj);
    ++graphs;
    if (solve_gap_dp(mis_to_adtypes(g)).welfare != brute_force_mis(g)) ++mis_mismatches;
  };
  for (int v = 1; v <= 6; ++v)
    for (const auto& adj : labelled_graphs(v)) check(adj);
  const auto classes7 = graph_classes(7);
  const auto classes8 = graph_classes(8);
  for (const auto& adj : classes7) check(adj);
  for (const auto& adj : classes8) check(adj);
  const bool counts_ok = classes7.size() == 1044 && classes8.size() == 12346;
  return {mismatches == 0 && mis_mismatches == 0 && counts_ok,
          fmt("%d gap instances, %d mismatches; MIS: %ld graphs (all labelled on 1-6 vertices, %zu classes on 7, %zu "
              "on 8), %d mismatches",
              kCount, mismatches, graphs, classes7.size(), classes8.size(), mis_mismatches)};
}

Outcome two_type_dp() {
  constexpr int kCount = 600;
  int mismatches = 0;
  for (int i = 0; i < kCount; ++i) {
    GenConfig cfg{1 + i % 12, 2, static_cast<std::uint64_t>(30000 + i)};
    cfg.discounts = static_cast<DiscountFamily>(i % 3);
    const auto inst = gen_random(cfg);
    if (welfare(inst, solve_two_type_dp(inst)) != welfare(inst, solve_adtypes(inst).matching)) ++mismatches;
  }
  return {mismatches == 0, fmt("%d instances, %d mismatches", kCount, mismatches)};
}

Outcome scaling() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = bench_scaling({{100, 4}, {200, 4}, {400, 4}});
  const double secs = seconds_since(start);
  const auto ratio = [&](const char* solver, int from) {
    return report.median_ms(2 * from, 4, solver) / report.median_ms(from, 4, solver);
  };
  const double a1 = ratio("adtypes", 100), a2 = ratio("adtypes", 200);
  const double g1 = ratio("generic", 100), g2 = ratio("generic", 200);
  return {a1 <= 5.5 && a2 <= 5.5 && g1 >= 6 && g2 >= 6 && secs < 300.0,
          fmt("adtypes ratios %.2f, %.2f (max 5.5); generic ratios %.2f, %.2f (min 6); %.1f s (limit 300 s)", a1, a2,
              g1, g2, secs)};
}

Outcome structural_invariants() {
  const auto instances = oracle_instances(1200);
  long phases = 0;
  int crossing = 0, queue = 0, scan = 0, prefix = 0;
  for (const auto& inst : instances) {
    const int n = inst.num_slots;
    const int k = inst.num_types();
    const double scale = 4.0 * n * n * 16;
    const auto near_zero = [&](const Perturbed& x) {
      const double tol = 1e-9 * scale;
      return std::abs(x.base) <= tol && std::abs(x.first) <= tol && std::abs(x.second) <= tol;
    };
    SolveStats stats;
    SolveOptions options;
    options.stats = &stats;
    options.on_phase = [&](const PhaseSnapshot& snap) {
      ++phases;
      const auto tight = [&](int t, int r, int j) {
        return near_zero(snap.ad_duals[static_cast<std::size_t>(t * n + r)] +
                         snap.slot_duals[static_cast<std::size_t>(j)] - perturbed_edge(inst, {t, r}, j));
      };
      for (int t = 0; t < k; ++t)
        for (int i = 0; i < n; ++i)
          for (int i2 = i + 1; i2 < n; ++i2)
            for (int j = 0; j < n; ++j)
              for (int j2 = j + 1; j2 < n; ++j2)
                if (tight(t, i, j2) && tight(t, i2, j)) ++crossing;
      double value = 0.0;
      bool shape = true;
      for (int j = 0; j < n; ++j) {
        const auto& ad = snap.matching.at(j);
        if (j <= snap.slot && ad) value += edge_value(inst, *ad, j);
        if ((j <= snap.slot) != ad.has_value()) shape = false;
      }
      Instance prefix_inst = inst;
      prefix_inst.num_slots = snap.slot + 1;
      for (auto& spec : prefix_inst.types) spec.discounts.resize(static_cast<std::size_t>(snap.slot + 1));
      prefix_inst = normalize_instance(std::move(prefix_inst));
      if (!shape || value != welfare(prefix_inst, solve_generic_hungarian(prefix_inst).matching)) ++prefix;
    };
    solve_adtypes(inst, options);
    if (stats.max_queue_ads > n + k) ++queue;
    if (stats.max_scan_candidates > 3 * k) ++scan;
  }
  return {crossing == 0 && queue == 0 && scan == 0 && prefix == 0,
          fmt("%zu runs, %ld phases; violations: crossing %d, queue %d, scan %d, prefix %d", instances.size(), phases,
              crossing, queue, scan, prefix)};
}

}  // namespace
}  // namespace adtypes::acceptance

int main(int argc, char** argv) {
  using namespace adtypes::acceptance;
  CLI::App app{"adtypes acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "worked example", example_one},
      {3, "vcg equivalence", vcg_equivalence},
      {4, "incentive compatibility", ic_audit},
      {5, "reserve pricing", reserve_pricing},
      {6, "greedy guarantee", greedy_guarantee},
      {7, "gap dp", gap_dp},
      {8, "two-type dp", two_type_dp},
      {9, "scaling", scaling},
      {10, "structural invariants", structural_invariants},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    if (!result.pass) ++failures;
    std::cout << (result.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.title << ": " << result.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
