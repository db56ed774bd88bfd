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

// Reference solvers that ignore the ad types structure (generic Hungarian,
// exhaustive search), the greedy approximation and allocation-curve probes.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adtypes/bids.hpp"
#include "adtypes/core.hpp"
#include "adtypes/hungarian.hpp"

namespace adtypes {

// Textbook Hungarian algorithm on the complete bipartite graph of all ads and
// slots. Each phase roots a tree at the next slot and rescans every ad when a
// slot joins the tree.
inline OptimalSolution solve_generic_hungarian(const Instance& inst) {
  require_valid(inst);
  require_no_gap_rules(inst, "solve_generic_hungarian");
  const int n = inst.num_slots;
  std::vector<AdRef> ads;
  for (int t = 0; t < inst.num_types(); ++t)
    for (int r = 0; r < inst.num_ads(t); ++r) ads.push_back({t, r});
  const int num_ads = static_cast<int>(ads.size());
  const auto w = [&](int i, int j) { return edge_value(inst, ads[static_cast<std::size_t>(i)], j); };

  std::vector<double> u(static_cast<std::size_t>(num_ads), 0.0);
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < num_ads; ++i) p[static_cast<std::size_t>(j)] = std::max(p[static_cast<std::size_t>(j)], w(i, j));
  std::vector<int> slot_of_ad(static_cast<std::size_t>(num_ads), -1);
  std::vector<int> ad_of_slot(static_cast<std::size_t>(n), -1);

  std::vector<double> slack(static_cast<std::size_t>(num_ads));
  std::vector<int> via(static_cast<std::size_t>(num_ads));
  std::vector<char> ad_used(static_cast<std::size_t>(num_ads));
  std::vector<int> tree_slots;
  std::vector<int> tree_ads;
  for (int root = 0; root < n; ++root) {
    std::fill(slack.begin(), slack.end(), std::numeric_limits<double>::infinity());
    std::fill(via.begin(), via.end(), -1);
    std::fill(ad_used.begin(), ad_used.end(), 0);
    tree_slots.assign(1, root);
    tree_ads.clear();
    int current = root;
    int free_ad = -1;
    while (free_ad < 0) {
      const auto c = static_cast<std::size_t>(current);
      for (int i = 0; i < num_ads; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (ad_used[ii]) continue;
        const double s = u[ii] + p[c] - w(i, current);
        if (s < slack[ii]) {
          slack[ii] = s;
          via[ii] = current;
        }
      }
      int next = -1;
      for (int i = 0; i < num_ads; ++i)
        if (!ad_used[static_cast<std::size_t>(i)] &&
            (next < 0 || slack[static_cast<std::size_t>(i)] < slack[static_cast<std::size_t>(next)]))
          next = i;
      if (next < 0) throw std::logic_error("solve_generic_hungarian: no augmenting path");
      const double delta = std::max(0.0, slack[static_cast<std::size_t>(next)]);
      for (int s : tree_slots) p[static_cast<std::size_t>(s)] -= delta;
      for (int a : tree_ads) u[static_cast<std::size_t>(a)] += delta;
      for (int i = 0; i < num_ads; ++i)
        if (!ad_used[static_cast<std::size_t>(i)]) slack[static_cast<std::size_t>(i)] -= delta;
      ad_used[static_cast<std::size_t>(next)] = 1;
      tree_ads.push_back(next);
      if (const int s = slot_of_ad[static_cast<std::size_t>(next)]; s >= 0) {
        tree_slots.push_back(s);
        current = s;
      } else {
        free_ad = next;
      }
    }
    for (int a = free_ad; a >= 0;) {
      const int s = via[static_cast<std::size_t>(a)];
      const int previous = ad_of_slot[static_cast<std::size_t>(s)];
      ad_of_slot[static_cast<std::size_t>(s)] = a;
      slot_of_ad[static_cast<std::size_t>(a)] = s;
      a = previous;
    }
  }

  OptimalSolution sol;
  sol.matching = Matching(n);
  for (int j = 0; j < n; ++j)
    if (const int a = ad_of_slot[static_cast<std::size_t>(j)]; a >= 0)
      sol.matching.assign(j, ads[static_cast<std::size_t>(a)]);
  sol.duals.p = p;
  for (int t = 0; t < inst.num_types(); ++t) sol.duals.u.emplace_back(static_cast<std::size_t>(inst.num_ads(t)), 0.0);
  for (int i = 0; i < num_ads; ++i) {
    const AdRef ad = ads[static_cast<std::size_t>(i)];
    sol.duals.u[static_cast<std::size_t>(ad.type)][static_cast<std::size_t>(ad.rank)] = u[static_cast<std::size_t>(i)];
  }
  sol.welfare = welfare(inst, sol.matching);
  return sol;
}

struct BruteForceLimits {
  int max_slots = 8;
  int max_types = 4;
};

// Exhaustive search over which type (or nothing) fills each slot. Given the
// slots a type occupies, its best ads go there in rank order (rearrangement
// inequality), so this covers every injective assignment's welfare.
inline Matching solve_bruteforce(const Instance& inst, BruteForceLimits limits = {}) {
  require_valid(inst);
  require_no_gap_rules(inst, "solve_bruteforce");
  if (inst.num_slots > limits.max_slots || inst.num_types() > limits.max_types)
    throw GuardRefusal("solve_bruteforce: n=" + std::to_string(inst.num_slots) + ", k=" +
                       std::to_string(inst.num_types()) + " exceeds the limit n<=" +
                       std::to_string(limits.max_slots) + ", k<=" + std::to_string(limits.max_types));
  const int n = inst.num_slots;
  const int k = inst.num_types();
  std::vector<int> used(static_cast<std::size_t>(k), 0);
  std::vector<int> choice(static_cast<std::size_t>(n), -1);
  std::vector<int> best_choice = choice;
  double best = -1.0;

  std::function<void(int, double)> dfs = [&](int slot, double value) {
    if (slot == n) {
      if (value > best) {
        best = value;
        best_choice = choice;
      }
      return;
    }
    for (int t = 0; t < k; ++t) {
      auto& count = used[static_cast<std::size_t>(t)];
      if (count >= inst.num_ads(t)) continue;
      choice[static_cast<std::size_t>(slot)] = t;
      ++count;
      dfs(slot + 1, value + edge_value(inst, {t, count - 1}, slot));
      --count;
    }
    choice[static_cast<std::size_t>(slot)] = -1;
    dfs(slot + 1, value);
  };
  dfs(0, 0.0);

  Matching m(n);
  std::fill(used.begin(), used.end(), 0);
  for (int j = 0; j < n; ++j)
    if (const int t = best_choice[static_cast<std::size_t>(j)]; t >= 0)
      m.assign(j, {t, used[static_cast<std::size_t>(t)]++});
  return m;
}

// Greedy: repeatedly take the most valuable edge compatible with the matching
// so far. With monotone discounts that edge always sits at the best free slot
// and the best free ad of some type, so one pass over the slots comparing k
// frontier ads suffices.
inline Matching solve_greedy(const Instance& inst) {
  require_valid(inst);
  require_no_gap_rules(inst, "solve_greedy");
  const int k = inst.num_types();
  std::vector<int> next(static_cast<std::size_t>(k), 0);
  Matching m(inst.num_slots);
  for (int slot = 0; slot < inst.num_slots; ++slot) {
    std::optional<AdRef> pick;
    double pick_value = 0.0;
    for (int t = 0; t < k; ++t) {
      const int r = next[static_cast<std::size_t>(t)];
      if (r >= inst.num_ads(t)) continue;
      const AdRef ad{t, r};
      const double v = edge_value(inst, ad, slot);
      if (!pick || EdgeOrder::before(v, slot, ad, pick_value, slot, *pick)) {
        pick = ad;
        pick_value = v;
      }
    }
    if (!pick) break;
    m.assign(slot, *pick);
    ++next[static_cast<std::size_t>(pick->type)];
  }
  return m;
}

// Quantity (discount) a bidder receives as a function of its own bid.
// quantity applies to every bid strictly above `threshold` up to the next
// breakpoint; it is 0 below the first threshold.
struct AllocationCurve {
  struct Breakpoint {
    double threshold;
    double quantity;
  };
  std::vector<Breakpoint> breakpoints;
  bool exact = true;  // false when the candidate set was capped

  double quantity_above(double bid) const {
    double q = 0.0;
    for (const auto& b : breakpoints)
      if (bid > b.threshold) q = b.quantity;
    return q;
  }
  // First pair (lower bid, higher bid) whose quantities decrease.
  std::optional<std::pair<double, double>> monotonicity_violation() const {
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (breakpoints[i].quantity < breakpoints[i - 1].quantity)
        return std::pair{breakpoints[i - 1].threshold, breakpoints[i].threshold};
    return std::nullopt;
  }
  bool monotone() const { return !monotonicity_violation().has_value(); }
  // Integral of the quantity over [from, to].
  double integral(double from, double to) const {
    double total = 0.0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      const double lo = std::max(from, breakpoints[i].threshold);
      const double hi = std::min(to, i + 1 < breakpoints.size() ? breakpoints[i + 1].threshold
                                                                : std::numeric_limits<double>::infinity());
      if (hi > lo) total += (hi - lo) * breakpoints[i].quantity;
    }
    return total;
  }
};

using MatchingAllocator = std::function<Matching(const Instance&)>;

// Quantity received by `bidder` when bidding `bid` against the rest of
// `profile`.
inline double allocated_quantity(const BidProfile& profile, BidderId bidder, double bid,
                                 const MatchingAllocator& allocator) {
  BidProfile probe = profile;
  probe.set_bid(bidder, bid);
  const auto realized = realize(probe);
  return realized.quantity(allocator(realized.inst), bidder);
}

// Sweeps the bid of `bidder` over the open intervals between consecutive
// candidate bids. The allocation is assumed constant on each interval, so the
// candidates must contain every bid at which it may change.
inline AllocationCurve sweep_allocation_curve(const BidProfile& profile, BidderId bidder,
                                              const MatchingAllocator& allocator,
                                              std::vector<double> candidates,
                                              std::size_t resolution = 0) {
  candidates.push_back(0.0);
  std::erase_if(candidates, [](double c) { return !(c >= 0.0) || !std::isfinite(c); });
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  AllocationCurve curve;
  if (resolution > 0 && candidates.size() > resolution) {
    std::vector<double> kept;
    for (std::size_t i = 0; i < resolution; ++i)
      kept.push_back(candidates[i * (candidates.size() - 1) / (resolution - 1 ? resolution - 1 : 1)]);
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    candidates = std::move(kept);
    curve.exact = false;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double lo = candidates[i];
    const double probe = i + 1 < candidates.size() ? lo + (candidates[i + 1] - lo) / 2
                                                   : lo + std::max(1.0, lo);
    const double q = allocated_quantity(profile, bidder, probe, allocator);
    if (curve.breakpoints.empty() ? q != 0.0 : q != curve.breakpoints.back().quantity)
      curve.breakpoints.push_back({lo, q});
  }
  return curve;
}

// Bids at which greedy's decisions involving `bidder` can change: where its
// edge value ties another edge, where it ties a same-type bid, its own bid
// and 0.
inline std::vector<double> greedy_candidate_bids(const BidProfile& profile, BidderId bidder) {
  const Instance& ref = profile.reference;
  std::vector<double> out{0.0, profile.bid(bidder)};
  std::vector<double> others;
  for (const BidderId b : profile.bidders()) {
    if (b == bidder || !profile.is_active(b)) continue;
    if (b.type == bidder.type) out.push_back(profile.bid(b));
    for (int s = 0; s < ref.num_slots; ++s) others.push_back(profile.bid(b) * ref.discount(b.type, s));
  }
  others.push_back(0.0);
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  for (int s = 0; s < ref.num_slots; ++s) {
    const double alpha = ref.discount(bidder.type, s);
    if (alpha <= 0) continue;
    for (double e : others) out.push_back(e / alpha);
  }
  return out;
}

// Allocation curve of `ad` under greedy, found by sweeping its bid over all
// analytic breakpoints. `resolution` caps the number of candidate bids; 0
// means no cap.
inline AllocationCurve greedy_allocation_curve(const Instance& inst, AdRef ad,
                                               std::size_t resolution = 0) {
  require_valid(inst);
  require_no_gap_rules(inst, "greedy_allocation_curve");
  const auto profile = BidProfile::truthful(inst);
  return sweep_allocation_curve(profile, ad, solve_greedy, greedy_candidate_bids(profile, ad),
                                resolution);
}

}  // namespace adtypes
