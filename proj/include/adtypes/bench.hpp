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

// Instance generators and the scaling benchmark.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adtypes/baseline.hpp"
#include "adtypes/core.hpp"
#include "adtypes/gapdp.hpp"
#include "adtypes/hungarian.hpp"

namespace adtypes {

enum class ValueDistribution { kUniformInt, kUniformReal, kPareto };
enum class DiscountFamily { kGeometric, kLinear, kStep };

struct GenConfig {
  int n = 4;
  int k = 2;
  std::uint64_t seed = 1;
  ValueDistribution values = ValueDistribution::kUniformInt;
  DiscountFamily discounts = DiscountFamily::kGeometric;
  int max_int_value = 16;  // for kUniformInt, values in [0, max_int_value]
};

namespace detail {

// Integer in [0, bound) without relying on library distribution details, so
// instances are identical across standard libraries.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline std::uint64_t next_power_of_two(std::uint64_t x) {
  std::uint64_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Discount curves use dyadic rationals so products with integer values are
// exact in binary floating point.
inline std::vector<double> draw_discounts(std::mt19937_64& rng, int n, DiscountFamily family) {
  std::vector<double> out(static_cast<std::size_t>(n));
  switch (family) {
    case DiscountFamily::kGeometric: {
      const double ratio = static_cast<double>(8 + draw_below(rng, 8)) / 16.0;
      double a = 1.0;
      for (auto& x : out) {
        x = a;
        a *= ratio;
      }
      break;
    }
    case DiscountFamily::kLinear: {
      const double span = static_cast<double>(next_power_of_two(static_cast<std::uint64_t>(n)) << draw_below(rng, 2));
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = (span - j) / span;
      break;
    }
    case DiscountFamily::kStep: {
      double level = 1.0;
      for (auto& x : out) {
        if (draw_below(rng, 3) == 0) level *= static_cast<double>(draw_below(rng, 16)) / 16.0;
        x = level;
      }
      break;
    }
  }
  return out;
}

inline double draw_value(std::mt19937_64& rng, const GenConfig& cfg) {
  switch (cfg.values) {
    case ValueDistribution::kUniformInt:
      return static_cast<double>(draw_below(rng, static_cast<std::uint64_t>(cfg.max_int_value) + 1));
    case ValueDistribution::kUniformReal:
      return 100.0 * draw_unit(rng);
    case ValueDistribution::kPareto:
      return 1.0 / std::pow(1.0 - draw_unit(rng), 1.0 / 1.5);
  }
  return 0.0;
}

}  // namespace detail

inline const char* to_string(ValueDistribution d) {
  switch (d) {
    case ValueDistribution::kUniformInt: return "uniform-int";
    case ValueDistribution::kUniformReal: return "uniform-real";
    case ValueDistribution::kPareto: return "pareto";
  }
  return "unknown";
}

inline const char* to_string(DiscountFamily d) {
  switch (d) {
    case DiscountFamily::kGeometric: return "geometric";
    case DiscountFamily::kLinear: return "linear";
    case DiscountFamily::kStep: return "step";
  }
  return "unknown";
}

// Random instance without gap rules; deterministic per seed.
inline Instance gen_random(const GenConfig& cfg) {
  if (cfg.n < 1 || cfg.k < 1) throw ValidationError("gen_random: n and k must be at least 1");
  std::mt19937_64 rng(cfg.seed);
  Instance inst;
  inst.num_slots = cfg.n;
  for (int t = 0; t < cfg.k; ++t) {
    TypeSpec spec;
    spec.name = "type" + std::to_string(t);
    spec.discounts = detail::draw_discounts(rng, cfg.n, cfg.discounts);
    spec.values.resize(static_cast<std::size_t>(cfg.n));
    for (auto& v : spec.values) v = detail::draw_value(rng, cfg);
    std::sort(spec.values.begin(), spec.values.end(), std::greater<>{});
    inst.types.push_back(std::move(spec));
  }
  return inst;
}

// Random gap instance: gap entries in [0, max_gap] and at most
// `max_positive_per_type` positive-value ads per type.
inline Instance gen_random_gap(const GenConfig& cfg, int max_gap, int max_positive_per_type) {
  Instance inst = gen_random(cfg);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& spec : inst.types) {
    const int keep = 1 + static_cast<int>(detail::draw_below(rng, static_cast<std::uint64_t>(max_positive_per_type)));
    for (std::size_t r = static_cast<std::size_t>(keep); r < spec.values.size(); ++r) spec.values[r] = 0.0;
  }
  GapMatrix gap(static_cast<std::size_t>(cfg.k), std::vector<int>(static_cast<std::size_t>(cfg.k)));
  for (auto& row : gap)
    for (auto& g : row) g = static_cast<int>(detail::draw_below(rng, static_cast<std::uint64_t>(max_gap) + 1));
  inst.gap = std::move(gap);
  return inst;
}

// Two types, two slots: type one has discounts (1 - eps, 0) and values (1, 1);
// type two has discounts (1, 1) and values (1, 0). The optimum is 2 - eps while
// greedy gets 1.
inline Instance gen_greedy_tight(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("gen_greedy_tight: epsilon must lie in (0, 1)");
  Instance inst;
  inst.num_slots = 2;
  inst.types.push_back({"theta1", {1.0, 1.0}, {1.0 - epsilon, 0.0}});
  inst.types.push_back({"theta2", {1.0, 0.0}, {1.0, 1.0}});
  return inst;
}

struct AssignmentReduction {
  Instance instance;
  double offset = 0.0;  // optimal ad types welfare minus offset = optimal assignment value
};

// Ad types instance with one type per row of `weights` (ads = rows,
// slots = columns). Column j gets (n-1-j) * v* added, v* = 1 + max weight,
// which makes every row strictly decreasing; rows then factor into a common
// value and a per-row discount curve.
inline AssignmentReduction assignment_to_adtypes(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 1) throw ValidationError("assignment_to_adtypes: empty matrix");
  double max_weight = 0.0;
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) throw ValidationError("assignment_to_adtypes: matrix must be square");
    for (double w : row) {
      if (!(w > 0)) throw ValidationError("assignment_to_adtypes: weights must be positive");
      max_weight = std::max(max_weight, w);
    }
  }
  const double lift = 1.0 + max_weight;
  std::vector<std::vector<double>> lifted(weights);
  double top = 0.0;
  for (auto& row : lifted)
    for (int j = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] += (n - 1 - j) * lift;
      top = std::max(top, row[static_cast<std::size_t>(j)]);
    }
  // A power-of-two common value keeps discount * value == lifted weight exact.
  const double scale = std::exp2(std::ceil(std::log2(top)));
  AssignmentReduction out;
  out.instance.num_slots = n;
  for (int i = 0; i < n; ++i) {
    TypeSpec spec{"row" + std::to_string(i), std::vector<double>(static_cast<std::size_t>(n), 0.0), {}};
    spec.values[0] = scale;
    for (double w : lifted[static_cast<std::size_t>(i)]) spec.discounts.push_back(w / scale);
    out.instance.types.push_back(std::move(spec));
  }
  out.offset = static_cast<double>(n) * (n - 1) / 2.0 * lift;
  return out;
}

// Uniform random graph with edge probability `density`.
inline Graph gen_random_graph(int vertices, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Graph g{vertices, {}};
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v)
      if (detail::draw_unit(rng) < density) g.edges.emplace_back(u, v);
  return g;
}

// Random positive integer matrix with entries in [1, max_weight].
inline std::vector<std::vector<double>> gen_assignment_matrix(int n, std::uint64_t seed, int max_weight = 20) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : w)
    for (auto& x : row) x = 1.0 + static_cast<double>(detail::draw_below(rng, static_cast<std::uint64_t>(max_weight)));
  return w;
}

struct BenchRow {
  int n;
  int k;
  std::string solver;
  double median_ms;
  double welfare;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  std::string to_csv() const {
    std::ostringstream out;
    out << "n,k,solver,median_ms,welfare\n";
    out.precision(17);
    for (const auto& r : rows) out << r.n << ',' << r.k << ',' << r.solver << ',' << r.median_ms << ',' << r.welfare << '\n';
    return out.str();
  }
  double median_ms(int n, int k, const std::string& solver) const {
    for (const auto& r : rows)
      if (r.n == n && r.k == k && r.solver == solver) return r.median_ms;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

struct BenchOptions {
  int reps = 5;
  std::uint64_t seed = 7;
  // Each size is timed on a batch of instances drawn from consecutive seeds;
  // rows report the batch time and the batch welfare.
  int instances = 5;
  ValueDistribution values = ValueDistribution::kUniformInt;
  DiscountFamily discounts = DiscountFamily::kLinear;
  // Each timed repetition loops the solver until this much time has passed.
  double min_rep_ms = 20.0;
};

// Times solve_adtypes and solve_generic_hungarian per size: one discarded
// warm-up, then the median over `reps` repetitions. Repetitions run round
// robin over every (size, solver) cell.
inline BenchReport bench_scaling(const std::vector<std::pair<int, int>>& sizes, const BenchOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  struct Cell {
    int n;
    int k;
    std::string solver;
    std::function<double()> solve;
    double welfare = 0.0;
    std::vector<double> times;
  };
  std::vector<std::vector<Instance>> batches;
  batches.reserve(sizes.size());
  std::vector<Cell> cells;
  for (const auto& [n, k] : sizes) {
    auto& batch = batches.emplace_back();
    for (int i = 0; i < std::max(1, options.instances); ++i)
      batch.push_back(gen_random({n, k, options.seed + static_cast<std::uint64_t>(i), options.values, options.discounts}));
    const auto total = [&batch](auto solve) {
      return [&batch, solve] {
        double w = 0.0;
        for (const auto& inst : batch) w += solve(inst).welfare;
        return w;
      };
    };
    cells.push_back({n, k, "adtypes", total([](const Instance& i) { return solve_adtypes(i); }), 0.0, {}});
    cells.push_back({n, k, "generic", total([](const Instance& i) { return solve_generic_hungarian(i); }), 0.0, {}});
  }
  for (auto& cell : cells) cell.welfare = cell.solve();  // warm-up
  for (int rep = 0; rep < std::max(1, options.reps); ++rep) {
    for (auto& cell : cells) {
      int iterations = 0;
      const auto start = Clock::now();
      double elapsed = 0.0;
      do {
        cell.solve();
        ++iterations;
        elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      } while (elapsed < options.min_rep_ms);
      cell.times.push_back(elapsed / iterations);
    }
  }
  BenchReport report;
  for (auto& cell : cells) {
    auto& times = cell.times;
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    report.rows.push_back({cell.n, cell.k, cell.solver, times[times.size() / 2], cell.welfare});
  }
  return report;
}

}  // namespace adtypes
