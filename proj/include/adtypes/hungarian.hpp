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

// Hungarian algorithm specialized to the ad types structure.
//
// Slots are added to the matching one per phase, best slot first. Each phase
// grows an alternating tree from the new slot; candidate ads sit in a priority
// queue keyed by the accumulated dual shift at which their edge into the tree
// becomes tight. Because tight edges of one type never cross, scanning a slot
// only needs three ads per type: the best unmatched ad, the worst matched ad
// sitting above the slot and the best matched ad sitting below it. The queue
// therefore never holds more than n+k ads and each scan touches at most 3k
// edges.
//
// Dual updates inside a phase are implicit: a single accumulator holds the
// total shift and every tree node remembers the accumulator value at which it
// joined. Values are written back when the phase ends.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "adtypes/core.hpp"
#include "adtypes/perturbed.hpp"

namespace adtypes {

struct DualSolution {
  std::vector<std::vector<double>> u;  // per type, per rank
  std::vector<double> p;               // per slot
};

struct OptimalSolution {
  Matching matching;
  DualSolution duals;
  double welfare = 0.0;
};

// Which ads are offered to the queue when a slot joins the tree.
enum class ScanPolicy {
  kFrontier,  // at most three ads per type
  kFull,      // every ad; reference variant for testing
};

struct PhaseRecord {
  int slot = 0;
  int pops = 0;
  double delta = 0.0;
  int path_length = 0;
};

struct SolveStats {
  int max_queue_ads = 0;
  int max_scan_candidates = 0;
  long scans = 0;
  std::vector<PhaseRecord> phases;
};

// Matching and duals at the end of one phase.
struct PhaseSnapshot {
  int slot;
  const Matching& matching;
  const std::vector<Perturbed>& ad_duals;  // flat ad index type * n + rank
  const std::vector<Perturbed>& slot_duals;
};

struct SolveOptions {
  ScanPolicy scan = ScanPolicy::kFrontier;
  SolveStats* stats = nullptr;
  // Receives "phase=<j> pops=<c> delta=<d> pathlen=<l>" per phase.
  std::ostream* trace = nullptr;
  std::function<void(const PhaseSnapshot&)> on_phase = nullptr;
};

// Per-phase lookup of the candidate ads for a slot scan. Built from the
// matching at phase start; the matching does not change within a phase.
class FrontierIndex {
 public:
  FrontierIndex(const Instance& inst, const Matching& m)
      : k_(inst.num_types()), n_(inst.num_slots) {
    const auto k = static_cast<std::size_t>(k_);
    const auto width = static_cast<std::size_t>(n_) + 1;
    first_unmatched_.assign(k, 0);
    below_.assign(k * width, -1);
    above_.assign(k * width, kNone);
    std::vector<std::vector<char>> matched(k);
    for (std::size_t t = 0; t < k; ++t)
      matched[t].assign(static_cast<std::size_t>(inst.num_ads(static_cast<int>(t))), 0);
    for (int j = 0; j < n_; ++j)
      if (const auto& ad = m.at(j))
        matched[static_cast<std::size_t>(ad->type)][static_cast<std::size_t>(ad->rank)] = 1;
    for (std::size_t t = 0; t < k; ++t) {
      int r = 0;
      const int count = static_cast<int>(matched[t].size());
      while (r < count && matched[t][static_cast<std::size_t>(r)]) ++r;
      first_unmatched_[t] = r < count ? r : -1;
    }
    // below_[t][s]: largest rank of type t matched to a slot < s.
    for (std::size_t t = 0; t < k; ++t) {
      int best = -1;
      for (int s = 0; s < n_; ++s) {
        below_[t * width + static_cast<std::size_t>(s)] = best;
        if (const auto& ad = m.at(s); ad && ad->type == static_cast<int>(t))
          best = std::max(best, ad->rank);
      }
      below_[t * width + static_cast<std::size_t>(n_)] = best;
    }
    // above_[t][s]: smallest rank of type t matched to a slot > s.
    for (std::size_t t = 0; t < k; ++t) {
      int best = kNone;
      for (int s = n_ - 1; s >= 0; --s) {
        above_[t * width + static_cast<std::size_t>(s)] = best;
        if (const auto& ad = m.at(s); ad && ad->type == static_cast<int>(t))
          best = std::min(best, ad->rank);
      }
    }
  }

  // The candidate set for a scan of `slot`, at most three ads per type.
  std::vector<AdRef> candidates(int slot) const {
    std::vector<AdRef> out;
    out.reserve(static_cast<std::size_t>(3 * k_));
    const auto width = static_cast<std::size_t>(n_) + 1;
    for (int t = 0; t < k_; ++t) {
      const auto tt = static_cast<std::size_t>(t);
      if (first_unmatched_[tt] >= 0) out.push_back({t, first_unmatched_[tt]});
      if (int r = below_[tt * width + static_cast<std::size_t>(slot)]; r >= 0)
        out.push_back({t, r});
      if (int r = above_[tt * width + static_cast<std::size_t>(slot)]; r != kNone)
        out.push_back({t, r});
    }
    return out;
  }

 private:
  static constexpr int kNone = std::numeric_limits<int>::max();
  int k_;
  int n_;
  std::vector<int> first_unmatched_;
  std::vector<int> below_;
  std::vector<int> above_;
};

// Alternating tree B, priority queue P and dual accumulator of one phase.
struct PhaseState {
  struct QueueEntry {
    Perturbed key;  // accumulator value at which the edge becomes tight
    int ad;
    int slot;
  };
  struct Later {
    PerturbedOrder order;
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (int c = order.compare(a.key, b.key); c != 0) return c > 0;
      if (a.slot != b.slot) return a.slot > b.slot;
      return a.ad > b.ad;
    }
  };

  int root = -1;
  Perturbed delta_acc;
  std::vector<char> ad_in_tree;
  std::vector<char> slot_in_tree;
  std::vector<int> parent_slot;  // slot that reached the ad
  std::vector<Perturbed> ad_joined;
  std::vector<Perturbed> slot_joined;
  std::vector<int> tree_ads;
  std::vector<int> tree_slots;

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, Later> queue;
  std::vector<Perturbed> best_key;
  std::vector<char> queued;
  int queued_ads = 0;
  int max_queued_ads = 0;
  int last_scan_size = 0;

  void reset(int num_ads, int num_slots, int root_slot, const PerturbedOrder& order) {
    root = root_slot;
    delta_acc = {};
    ad_in_tree.assign(static_cast<std::size_t>(num_ads), 0);
    slot_in_tree.assign(static_cast<std::size_t>(num_slots), 0);
    parent_slot.assign(static_cast<std::size_t>(num_ads), -1);
    ad_joined.assign(static_cast<std::size_t>(num_ads), {});
    slot_joined.assign(static_cast<std::size_t>(num_slots), {});
    tree_ads.clear();
    tree_slots.clear();
    queue = decltype(queue)(Later{order});
    best_key.assign(static_cast<std::size_t>(num_ads), {});
    queued.assign(static_cast<std::size_t>(num_ads), 0);
    queued_ads = 0;
    max_queued_ads = 0;
    last_scan_size = 0;
  }
};

namespace detail {

class AdTypesSolver {
 public:
  AdTypesSolver(const Instance& inst, SolveOptions options)
      : inst_(inst), options_(std::move(options)), n_(inst.num_slots),
        k_(inst.num_types()), order_(perturbed_order(inst)), matching_(inst.num_slots) {
    const auto ads = static_cast<std::size_t>(n_ * k_);
    u_.assign(ads, {});
    p_.assign(static_cast<std::size_t>(n_), {});
    slot_of_ad_.assign(ads, -1);
    for (int j = 0; j < n_; ++j) {
      Perturbed best{};
      for (int t = 0; t < k_; ++t) best = std::max(best, weight(id({t, 0}), j), order_);
      p_[static_cast<std::size_t>(j)] = best;
    }
  }

  OptimalSolution run() {
    for (int j = 0; j < n_; ++j) run_phase(j);
    OptimalSolution sol;
    sol.matching = matching_;
    sol.duals.u.assign(static_cast<std::size_t>(k_), std::vector<double>(static_cast<std::size_t>(n_)));
    for (int a = 0; a < n_ * k_; ++a)
      sol.duals.u[static_cast<std::size_t>(a / n_)][static_cast<std::size_t>(a % n_)] =
          u_[static_cast<std::size_t>(a)].base;
    sol.duals.p.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) sol.duals.p[static_cast<std::size_t>(j)] = p_[static_cast<std::size_t>(j)].base;
    sol.welfare = welfare(inst_, matching_);
    return sol;
  }

 private:
  int id(AdRef ad) const { return ad.type * n_ + ad.rank; }
  AdRef ref(int ad) const { return {ad / n_, ad % n_}; }
  Perturbed weight(int ad, int slot) const { return perturbed_edge(inst_, ref(ad), slot); }

  void scan(PhaseState& state, const FrontierIndex& index, int slot) {
    std::vector<AdRef> candidates;
    if (options_.scan == ScanPolicy::kFrontier) {
      candidates = index.candidates(slot);
    } else {
      candidates.reserve(static_cast<std::size_t>(n_ * k_));
      for (int a = 0; a < n_ * k_; ++a) candidates.push_back(ref(a));
    }
    state.last_scan_size = static_cast<int>(candidates.size());
    if (options_.stats) {
      ++options_.stats->scans;
      options_.stats->max_scan_candidates =
          std::max(options_.stats->max_scan_candidates, state.last_scan_size);
    }
    const auto s = static_cast<std::size_t>(slot);
    for (const AdRef ad : candidates) {
      const int a = id(ad);
      const auto aa = static_cast<std::size_t>(a);
      if (state.ad_in_tree[aa]) continue;
      const Perturbed key = u_[aa] + p_[s] - weight(a, slot) + state.slot_joined[s];
      if (state.queued[aa] && !order_.less(key, state.best_key[aa])) continue;
      if (!state.queued[aa]) {
        state.queued[aa] = 1;
        ++state.queued_ads;
        state.max_queued_ads = std::max(state.max_queued_ads, state.queued_ads);
      }
      state.best_key[aa] = key;
      state.queue.push({key, a, slot});
    }
  }

  void add_slot(PhaseState& state, const FrontierIndex& index, int slot) {
    const auto s = static_cast<std::size_t>(slot);
    state.slot_in_tree[s] = 1;
    state.slot_joined[s] = state.delta_acc;
    state.tree_slots.push_back(slot);
    scan(state, index, slot);
  }

  void run_phase(int root) {
    PhaseState& state = state_;
    state.reset(n_ * k_, n_, root, order_);
    const FrontierIndex index(inst_, matching_);
    add_slot(state, index, root);
    int pops = 0;
    int free_ad = -1;
    while (free_ad < 0) {
      if (state.queue.empty())
        throw std::logic_error("adtypes: phase " + std::to_string(root) +
                               " ran out of candidate edges");
      const auto entry = state.queue.top();
      state.queue.pop();
      ++pops;
      const auto aa = static_cast<std::size_t>(entry.ad);
      if (state.ad_in_tree[aa] || !state.queued[aa] || entry.key != state.best_key[aa])
        continue;  // stale
      state.queued[aa] = 0;
      --state.queued_ads;
      // Delta may be zero; each iteration still consumes one queue entry.
      if (order_.less(state.delta_acc, entry.key)) state.delta_acc = entry.key;
      state.ad_in_tree[aa] = 1;
      state.ad_joined[aa] = state.delta_acc;
      state.parent_slot[aa] = entry.slot;
      state.tree_ads.push_back(entry.ad);
      if (const int next = slot_of_ad_[aa]; next >= 0) {
        add_slot(state, index, next);
      } else {
        free_ad = entry.ad;
      }
    }
    // Augment along parent links back to the root.
    int path_length = 0;
    int ad = free_ad;
    while (true) {
      const int slot = state.parent_slot[static_cast<std::size_t>(ad)];
      const auto previous = matching_.at(slot);
      matching_.assign(slot, ref(ad));
      slot_of_ad_[static_cast<std::size_t>(ad)] = slot;
      ++path_length;
      if (slot == root) break;
      ad = id(*previous);
      ++path_length;
    }
    // Explicit dual write-back.
    for (int a : state.tree_ads)
      u_[static_cast<std::size_t>(a)] += state.delta_acc - state.ad_joined[static_cast<std::size_t>(a)];
    for (int s : state.tree_slots)
      p_[static_cast<std::size_t>(s)] -= state.delta_acc - state.slot_joined[static_cast<std::size_t>(s)];

    if (options_.stats) {
      options_.stats->max_queue_ads = std::max(options_.stats->max_queue_ads, state.max_queued_ads);
      options_.stats->phases.push_back({root, pops, state.delta_acc.base, path_length});
    }
    if (options_.trace)
      *options_.trace << "phase=" << root << " pops=" << pops << " delta=" << state.delta_acc.base
                      << " pathlen=" << path_length << '\n';
    if (options_.on_phase) options_.on_phase(PhaseSnapshot{root, matching_, u_, p_});
  }

  const Instance& inst_;
  SolveOptions options_;
  int n_;
  int k_;
  PerturbedOrder order_;
  Matching matching_;
  std::vector<Perturbed> u_;
  std::vector<Perturbed> p_;
  std::vector<int> slot_of_ad_;
  PhaseState state_;
};

}  // namespace detail

// Maximum-welfare matching with a dual certificate for an instance without
// gap rules. Every slot ends up matched (possibly to a zero-value ad).
inline OptimalSolution solve_adtypes(const Instance& inst, SolveOptions options = {}) {
  require_valid(inst);
  require_no_gap_rules(inst, "solve_adtypes");
  return detail::AdTypesSolver(inst, std::move(options)).run();
}

struct CertificateReport {
  bool pass = true;
  double worst_violation = 0.0;
  std::string message;
};

// Checks dual feasibility on every edge, non-negativity, tightness of matched
// edges and the duality gap. Violations are measured against `tolerance`
// scaled by max(1, largest edge value).
inline CertificateReport certify(const Instance& inst, const OptimalSolution& sol,
                                 double tolerance = kTolerance) {
  CertificateReport report;
  const auto fail = [&](double amount, const std::string& what) {
    if (amount > report.worst_violation) {
      report.worst_violation = amount;
      report.message = what;
    }
  };
  const int n = inst.num_slots;
  const int k = inst.num_types();
  const auto& duals = sol.duals;
  if (static_cast<int>(duals.p.size()) != n || static_cast<int>(duals.u.size()) != k) {
    return {false, std::numeric_limits<double>::infinity(), "dual dimensions do not match instance"};
  }
  for (int t = 0; t < k; ++t)
    if (static_cast<int>(duals.u[static_cast<std::size_t>(t)].size()) != inst.num_ads(t))
      return {false, std::numeric_limits<double>::infinity(), "dual dimensions do not match instance"};
  try {
    check_matching(inst, sol.matching);
  } catch (const ValidationError& e) {
    return {false, std::numeric_limits<double>::infinity(), e.what()};
  }
  double scale = 1.0;
  for (int t = 0; t < k; ++t)
    for (int r = 0; r < inst.num_ads(t); ++r)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(edge_value(inst, {t, r}, j)));

  double dual_total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p = duals.p[static_cast<std::size_t>(j)];
    dual_total += p;
    if (p < 0) fail(-p, "negative price at slot " + std::to_string(j));
  }
  for (int t = 0; t < k; ++t) {
    for (int r = 0; r < inst.num_ads(t); ++r) {
      const double u = duals.u[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)];
      dual_total += u;
      if (u < 0) fail(-u, "negative utility for ad (" + std::to_string(t) + "," + std::to_string(r) + ")");
      for (int j = 0; j < n; ++j) {
        const double slack = u + duals.p[static_cast<std::size_t>(j)] - edge_value(inst, {t, r}, j);
        if (slack < 0)
          fail(-slack, "infeasible edge ad (" + std::to_string(t) + "," + std::to_string(r) +
                           ") slot " + std::to_string(j));
      }
    }
  }
  double primal = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& ad = sol.matching.at(j);
    if (!ad) continue;
    const double w = edge_value(inst, *ad, j);
    primal += w;
    const double slack = duals.u[static_cast<std::size_t>(ad->type)][static_cast<std::size_t>(ad->rank)] +
                         duals.p[static_cast<std::size_t>(j)] - w;
    if (std::abs(slack) > 0) fail(std::abs(slack), "matched edge at slot " + std::to_string(j) + " not tight");
  }
  fail(std::abs(dual_total - primal), "duality gap");
  fail(std::abs(sol.welfare - primal), "reported welfare differs from matching");
  report.pass = report.worst_violation <= tolerance * scale;
  if (report.pass) report.message.clear();
  return report;
}

}  // namespace adtypes
