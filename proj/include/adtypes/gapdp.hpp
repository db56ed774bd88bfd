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

// Exact solvers for the ad types problem with gap rules.
//
// A DP state records, per type, how many ads are placed and the slot of the
// last one. Ads of a type are placed in rank order. The value of a state is
// the best welfare of an allocation consistent with it; the answer is the best
// state overall. States are only materialized when reachable from the empty
// state, bucketed by their largest used slot so that every transition goes to
// a later bucket.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adtypes/core.hpp"

namespace adtypes {

inline constexpr int kNoSlot = -1;

struct GapDpState {
  std::vector<int> counts;
  std::vector<int> last_slots;  // kNoSlot when the type has no ad placed

  friend bool operator==(const GapDpState&, const GapDpState&) = default;

  // Type with the largest last slot, or -1 for the empty state.
  int latest_type() const {
    int best = -1;
    for (int t = 0; t < static_cast<int>(last_slots.size()); ++t)
      if (last_slots[static_cast<std::size_t>(t)] != kNoSlot &&
          (best < 0 || last_slots[static_cast<std::size_t>(t)] > last_slots[static_cast<std::size_t>(best)]))
        best = t;
    return best;
  }
  int latest_slot() const {
    const int t = latest_type();
    return t < 0 ? kNoSlot : last_slots[static_cast<std::size_t>(t)];
  }
};

// True iff no type-b ad sits within G[a][b] slots after a type-a ad.
inline bool check_gap_feasible(const Instance& inst, const Matching& m) {
  const int n = m.num_slots();
  for (int j = 0; j < n; ++j) {
    const auto& first = m.at(j);
    if (!first) continue;
    for (int later = j + 1; later < n; ++later) {
      const auto& second = m.at(later);
      if (second && later - j <= inst.gap_between(first->type, second->type)) return false;
    }
  }
  return true;
}

// Slots where the second-to-last ad of `type` can sit in `state`, where
// `type` holds the largest last slot. {nullopt} when it is the type's only ad.
inline std::vector<std::optional<int>> feasible_predecessors(const Instance& inst, int type,
                                                             const GapDpState& state) {
  const auto tt = static_cast<std::size_t>(type);
  if (state.counts[tt] == 1) return {std::nullopt};
  std::vector<std::optional<int>> out;
  const int last = state.last_slots[tt];
  const int k = inst.num_types();
  for (int j = 0; j < last; ++j) {
    bool ok = last - j > inst.gap_between(type, type);
    for (int q = 0; q < k && ok; ++q) {
      const int s = state.last_slots[static_cast<std::size_t>(q)];
      if (q == type || s == kNoSlot) continue;
      if (s == j) ok = false;
      else if (s < j) ok = j - s > inst.gap_between(q, type);
      else ok = s - j > inst.gap_between(type, q);
      // The ad at `last` must also clear every other type's last ad.
      ok = ok && (s > last || last - s > inst.gap_between(q, type));
    }
    if (ok) out.push_back(j);
  }
  return out;
}

struct GapDpLimits {
  int max_slots = 15;
  int max_types = 8;
  // Bound on prod over types of (1 + allocatable ads * n).
  double max_states = 5e8;
};

struct GapDpResult {
  Matching matching;
  double welfare = 0.0;
  std::size_t states = 0;
};

namespace detail {

// Packs a state into 8 bits per type: count (high nibble), last slot + 1.
class GapDpCodec {
 public:
  explicit GapDpCodec(int types) : k_(types) {}
  std::uint64_t encode(const GapDpState& s) const {
    std::uint64_t key = 0;
    for (int t = 0; t < k_; ++t) {
      const auto tt = static_cast<std::size_t>(t);
      const auto byte = static_cast<std::uint64_t>((s.counts[tt] << 4) | (s.last_slots[tt] + 1));
      key |= byte << (8 * t);
    }
    return key;
  }
  GapDpState decode(std::uint64_t key) const {
    GapDpState s{std::vector<int>(static_cast<std::size_t>(k_)), std::vector<int>(static_cast<std::size_t>(k_))};
    for (int t = 0; t < k_; ++t) {
      const auto byte = static_cast<int>((key >> (8 * t)) & 0xff);
      s.counts[static_cast<std::size_t>(t)] = byte >> 4;
      s.last_slots[static_cast<std::size_t>(t)] = (byte & 0xf) - 1;
    }
    return s;
  }

 private:
  int k_;
};

inline std::vector<int> allocatable_ads(const Instance& inst) {
  std::vector<int> caps;
  for (const auto& spec : inst.types)
    caps.push_back(static_cast<int>(std::count_if(spec.values.begin(), spec.values.end(),
                                                  [](double v) { return v > 0; })));
  return caps;
}

}  // namespace detail

// Full DP table: value of every reachable state. Exposed for tests that check
// the table against the backward recurrence.
struct GapDpTable {
  struct Entry {
    double value;
    std::uint64_t parent;
  };
  int num_types = 0;
  // buckets[s + 1]: states whose largest used slot is s.
  std::vector<std::unordered_map<std::uint64_t, Entry>> buckets;

  const Entry* find(const GapDpState& s) const {
    const detail::GapDpCodec codec(num_types);
    const auto& bucket = buckets[static_cast<std::size_t>(s.latest_slot() + 1)];
    const auto it = bucket.find(codec.encode(s));
    return it == bucket.end() ? nullptr : &it->second;
  }
};

inline GapDpTable build_gap_dp_table(const Instance& inst, GapDpLimits limits = {}) {
  require_valid(inst);
  const int n = inst.num_slots;
  const int k = inst.num_types();
  const auto caps = detail::allocatable_ads(inst);
  double estimate = 1.0;
  for (int c : caps) estimate *= 1.0 + static_cast<double>(c) * n;
  if (n > limits.max_slots || k > limits.max_types || estimate > limits.max_states) {
    std::ostringstream msg;
    msg << "solve_gap_dp: n=" << n << ", k=" << k << " gives an estimated " << estimate
        << " states; limits are n<=" << limits.max_slots << ", k<=" << limits.max_types
        << ", states<=" << limits.max_states;
    throw GuardRefusal(msg.str());
  }
  const detail::GapDpCodec codec(k);
  GapDpTable table;
  table.num_types = k;
  table.buckets.resize(static_cast<std::size_t>(n) + 1);
  GapDpState empty{std::vector<int>(static_cast<std::size_t>(k), 0),
                   std::vector<int>(static_cast<std::size_t>(k), kNoSlot)};
  table.buckets[0].emplace(codec.encode(empty), GapDpTable::Entry{0.0, 0});

  for (int bucket = 0; bucket <= n; ++bucket) {
    const int latest = bucket - 1;
    for (const auto& [key, entry] : table.buckets[static_cast<std::size_t>(bucket)]) {
      GapDpState state = codec.decode(key);
      for (int t = 0; t < k; ++t) {
        const auto tt = static_cast<std::size_t>(t);
        const int rank = state.counts[tt];
        if (rank >= caps[tt]) continue;
        int first = latest + 1;
        for (int q = 0; q < k; ++q) {
          const int s = state.last_slots[static_cast<std::size_t>(q)];
          if (s != kNoSlot) first = std::max(first, s + inst.gap_between(q, t) + 1);
        }
        const int saved_slot = state.last_slots[tt];
        ++state.counts[tt];
        for (int slot = first; slot < n; ++slot) {
          state.last_slots[tt] = slot;
          const double value = entry.value + edge_value(inst, {t, rank}, slot);
          auto& target = table.buckets[static_cast<std::size_t>(slot) + 1];
          const auto [it, inserted] = target.try_emplace(codec.encode(state), GapDpTable::Entry{value, key});
          if (!inserted && value > it->second.value) it->second = {value, key};
        }
        --state.counts[tt];
        state.last_slots[tt] = saved_slot;
      }
    }
  }
  return table;
}

// Maximum-welfare gap-feasible matching.
inline GapDpResult solve_gap_dp(const Instance& inst, GapDpLimits limits = {}) {
  const auto table = build_gap_dp_table(inst, limits);
  const detail::GapDpCodec codec(inst.num_types());
  std::uint64_t best_key = 0;
  int best_bucket = 0;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t states = 0;
  for (int b = 0; b < static_cast<int>(table.buckets.size()); ++b) {
    states += table.buckets[static_cast<std::size_t>(b)].size();
    for (const auto& [key, entry] : table.buckets[static_cast<std::size_t>(b)])
      if (entry.value > best || (entry.value == best && b == best_bucket && key < best_key)) {
        best = entry.value;
        best_key = key;
        best_bucket = b;
      }
  }
  GapDpResult result{Matching(inst.num_slots), best, states};
  // Walk parents, peeling the type holding the largest slot each step.
  std::uint64_t key = best_key;
  while (true) {
    const GapDpState s = codec.decode(key);
    const int t = s.latest_type();
    if (t < 0) break;
    const int slot = s.last_slots[static_cast<std::size_t>(t)];
    result.matching.assign(slot, {t, s.counts[static_cast<std::size_t>(t)] - 1});
    key = table.buckets[static_cast<std::size_t>(slot) + 1].at(key).parent;
  }
  result.welfare = welfare(inst, result.matching);
  return result;
}

struct BruteForceGapLimits {
  int max_slots = 6;
  int max_ads = 12;  // ads with positive value
};

// Exhaustive search over every injective, gap-feasible partial assignment of
// positive-value ads to slots.
inline Matching brute_force_gap(const Instance& inst, BruteForceGapLimits limits = {}) {
  require_valid(inst);
  std::vector<AdRef> ads;
  for (int t = 0; t < inst.num_types(); ++t)
    for (int r = 0; r < inst.num_ads(t); ++r)
      if (inst.value({t, r}) > 0) ads.push_back({t, r});
  if (inst.num_slots > limits.max_slots || static_cast<int>(ads.size()) > limits.max_ads)
    throw GuardRefusal("brute_force_gap: n=" + std::to_string(inst.num_slots) + " with " +
                       std::to_string(ads.size()) + " positive ads exceeds n<=" +
                       std::to_string(limits.max_slots) + ", ads<=" + std::to_string(limits.max_ads));
  const int n = inst.num_slots;
  Matching current(n);
  Matching best_matching(n);
  double best = -1.0;
  std::vector<char> used(ads.size(), 0);

  const auto fits = [&](int slot, int type) {
    for (int j = 0; j < slot; ++j)
      if (const auto& ad = current.at(j); ad && slot - j <= inst.gap_between(ad->type, type)) return false;
    return true;
  };
  std::function<void(int, double)> dfs = [&](int slot, double value) {
    if (slot == n) {
      if (value > best) {
        best = value;
        best_matching = current;
      }
      return;
    }
    dfs(slot + 1, value);
    for (std::size_t i = 0; i < ads.size(); ++i) {
      if (used[i] || !fits(slot, ads[i].type)) continue;
      used[i] = 1;
      current.assign(slot, ads[i]);
      dfs(slot + 1, value + edge_value(inst, ads[i], slot));
      current.clear(slot);
      used[i] = 0;
    }
  };
  dfs(0, 0.0);
  return best_matching;
}

// Optimal allocation for two types without gap rules: A[i][j] is the best
// welfare of the slots from i+j on once the top i ads of the first type and
// the top j ads of the second are placed.
inline Matching solve_two_type_dp(const Instance& inst) {
  require_valid(inst);
  if (inst.num_types() != 2) throw ValidationError("solve_two_type_dp: requires exactly 2 ad types");
  require_no_gap_rules(inst, "solve_two_type_dp");
  const int n = inst.num_slots;
  const int a_count = inst.num_ads(0);
  const int b_count = inst.num_ads(1);
  const auto at = [&](int i, int j) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(j); };
  std::vector<double> table(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1), 0.0);
  std::vector<char> take_first(table.size(), 0);
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  for (int total = n - 1; total >= 0; --total) {
    for (int i = 0; i <= total; ++i) {
      const int j = total - i;
      const double first = i < a_count ? edge_value(inst, {0, i}, total) + table[at(i + 1, j)] : kNone;
      const double second = j < b_count ? edge_value(inst, {1, j}, total) + table[at(i, j + 1)] : kNone;
      if (first == kNone && second == kNone) continue;
      take_first[at(i, j)] = first >= second;
      table[at(i, j)] = std::max(first, second);
    }
  }
  Matching m(n);
  for (int i = 0, j = 0; i + j < n;) {
    const int slot = i + j;
    if (i >= a_count && j >= b_count) break;
    if (take_first[at(i, j)]) m.assign(slot, {0, i++});
    else m.assign(slot, {1, j++});
  }
  return m;
}

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;

  bool adjacent(int a, int b) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
      return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
  }
};

// Edge-list text: "n m" then m lines "u v", 0-indexed.
inline Graph parse_graph(std::istream& in) {
  Graph g;
  int m = 0;
  if (!(in >> g.vertices >> m) || g.vertices < 0 || m < 0) throw ValidationError("graph: bad header");
  for (int e = 0; e < m; ++e) {
    int u = 0;
    int v = 0;
    if (!(in >> u >> v)) throw ValidationError("graph: expected " + std::to_string(m) + " edges");
    if (u < 0 || v < 0 || u >= g.vertices || v >= g.vertices) throw ValidationError("graph: vertex out of range");
    if (u == v) throw ValidationError("graph: self-loop");
    if (g.adjacent(u, v)) throw ValidationError("graph: duplicate edge");
    g.edges.emplace_back(u, v);
  }
  return g;
}

inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << g.vertices << ' ' << g.edges.size() << '\n';
  for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
  return out.str();
}

// One unit-value ad per vertex type, all discounts 1, and a gap of k slots in
// both directions between adjacent types, so that feasible allocations are
// independent sets.
inline Instance mis_to_adtypes(const Graph& g) {
  if (g.vertices < 1) throw ValidationError("mis_to_adtypes: graph needs a vertex");
  const int k = g.vertices;
  Instance inst;
  inst.num_slots = k;
  for (int t = 0; t < k; ++t) {
    TypeSpec spec{"v" + std::to_string(t), std::vector<double>(static_cast<std::size_t>(k), 0.0),
                  std::vector<double>(static_cast<std::size_t>(k), 1.0)};
    spec.values[0] = 1.0;
    inst.types.push_back(std::move(spec));
  }
  GapMatrix gap(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (const auto& [u, v] : g.edges) {
    gap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = k;
    gap[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = k;
  }
  inst.gap = std::move(gap);
  return inst;
}

// Size of a maximum independent set by subset enumeration.
inline int brute_force_mis(const Graph& g) {
  if (g.vertices > 24) throw GuardRefusal("brute_force_mis: more than 24 vertices");
  std::vector<std::uint32_t> neighbours(static_cast<std::size_t>(g.vertices), 0);
  for (const auto& [u, v] : g.edges) {
    neighbours[static_cast<std::size_t>(u)] |= 1u << v;
    neighbours[static_cast<std::size_t>(v)] |= 1u << u;
  }
  int best = 0;
  for (std::uint32_t set = 0; set < (1u << g.vertices); ++set) {
    bool independent = true;
    for (int v = 0; v < g.vertices && independent; ++v)
      if ((set >> v & 1u) && (neighbours[static_cast<std::size_t>(v)] & set)) independent = false;
    if (independent) best = std::max(best, __builtin_popcount(set));
  }
  return best;
}

}  // namespace adtypes
