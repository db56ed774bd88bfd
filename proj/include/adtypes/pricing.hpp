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

// Incentive-compatible payments for the ad types auction.
//
// VCG prices are the point-wise smallest slot prices among all optimal duals.
// vcg_prices_fast gets there from any optimal dual by lowering all prices in
// lock-step and freezing slots as they hit a binding constraint;
// vcg_prices_naive re-solves once per winner.
//
// Reserve prices are applied eagerly: bidders below their reserve are dropped
// before allocation. price_with_reserves charges each winner the welfare the
// others lose relative to the allocation where the winner bids exactly its
// reserve, plus the reserve per unit received in that allocation. The
// changepoint oracle recovers the same payments from the allocation curve.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "adtypes/baseline.hpp"
#include "adtypes/bids.hpp"
#include "adtypes/core.hpp"
#include "adtypes/hungarian.hpp"

namespace adtypes {

// Lowers slot prices of `sol` to the point-wise minimal optimal duals.
// Returns the duals; .p are the VCG prices of the slots.
inline DualSolution vcg_prices_fast(const Instance& inst, const OptimalSolution& sol) {
  if (const auto cert = certify(inst, sol); !cert.pass)
    throw ValidationError("vcg_prices_fast: solution fails certification: " + cert.message);
  const int n = inst.num_slots;
  const int k = inst.num_types();
  const auto& m = sol.matching;
  DualSolution out = sol.duals;
  const auto& p0 = sol.duals.p;
  const auto& u0 = sol.duals.u;

  std::vector<char> slot_frozen(static_cast<std::size_t>(n), 1);
  for (int j = 0; j < n; ++j)
    if (m.at(j)) slot_frozen[static_cast<std::size_t>(j)] = 0;

  using Event = std::pair<double, int>;  // (shift at which slot binds, slot)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (int j = 0; j < n; ++j)
    if (!slot_frozen[static_cast<std::size_t>(j)]) events.push({p0[static_cast<std::size_t>(j)], j});

  // Unmatched ads keep their utility; only the best one per slot can bind.
  std::vector<std::vector<char>> matched(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) matched[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(inst.num_ads(t)), 0);
  for (int j = 0; j < n; ++j)
    if (const auto& ad = m.at(j)) matched[static_cast<std::size_t>(ad->type)][static_cast<std::size_t>(ad->rank)] = 1;
  for (int j = 0; j < n; ++j) {
    if (slot_frozen[static_cast<std::size_t>(j)]) continue;
    double key = std::numeric_limits<double>::infinity();
    for (int t = 0; t < k; ++t)
      for (int r = 0; r < inst.num_ads(t); ++r)
        if (!matched[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)])
          key = std::min(key, u0[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] +
                                  p0[static_cast<std::size_t>(j)] - edge_value(inst, {t, r}, j));
    if (std::isfinite(key)) events.push({key, j});
  }

  double shift = 0.0;
  std::vector<int> pending;
  while (!events.empty()) {
    const auto [key, root] = events.top();
    events.pop();
    if (slot_frozen[static_cast<std::size_t>(root)]) continue;
    shift = std::max(shift, key);
    pending.assign(1, root);
    slot_frozen[static_cast<std::size_t>(root)] = 1;
    // Alternating search over edges that are tight at the current shift.
    while (!pending.empty()) {
      const int j = pending.back();
      pending.pop_back();
      const AdRef ad = *m.at(j);
      out.p[static_cast<std::size_t>(j)] = p0[static_cast<std::size_t>(j)] - shift;
      const double u = u0[static_cast<std::size_t>(ad.type)][static_cast<std::size_t>(ad.rank)] + shift;
      out.u[static_cast<std::size_t>(ad.type)][static_cast<std::size_t>(ad.rank)] = u;
      for (int s = 0; s < n; ++s) {
        if (slot_frozen[static_cast<std::size_t>(s)]) continue;
        const double bind = u + p0[static_cast<std::size_t>(s)] - edge_value(inst, ad, s);
        if (bind <= shift) {
          slot_frozen[static_cast<std::size_t>(s)] = 1;
          pending.push_back(s);
        } else {
          events.push({bind, s});
        }
      }
    }
  }
  for (auto& p : out.p) p = std::max(p, 0.0);
  return out;
}

// Instance with one ad removed (its type is padded back with a zero ad).
inline Instance without_ad(const Instance& inst, AdRef ad) {
  Instance out = inst;
  auto& values = out.types[static_cast<std::size_t>(ad.type)].values;
  values.erase(values.begin() + ad.rank);
  return normalize_instance(std::move(out));
}

// VCG prices by definition: the winner of slot j pays the others' optimal
// welfare without it minus the others' welfare in `m`.
inline std::vector<double> vcg_prices_naive(const Instance& inst, const Matching& m) {
  require_valid(inst);
  require_no_gap_rules(inst, "vcg_prices_naive");
  const double total = welfare(inst, m);
  std::vector<double> prices(static_cast<std::size_t>(inst.num_slots), 0.0);
  for (int j = 0; j < inst.num_slots; ++j) {
    const auto& ad = m.at(j);
    if (!ad) continue;
    const double others_without = solve_adtypes(without_ad(inst, *ad)).welfare;
    const double others_with = total - edge_value(inst, *ad, j);
    prices[static_cast<std::size_t>(j)] = std::max(0.0, others_without - others_with);
  }
  return prices;
}

inline std::vector<double> vcg_prices_naive(const Instance& inst) {
  return vcg_prices_naive(inst, solve_adtypes(inst).matching);
}

// Slots whose price could drop by `epsilon` while keeping the duals feasible
// and complementary to `m`. Empty for point-wise minimal prices.
inline std::vector<int> non_minimal_slots(const Instance& inst, const Matching& m,
                                          const DualSolution& duals, double epsilon = 1e-6) {
  const int n = inst.num_slots;
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (!m.at(j) || duals.p[static_cast<std::size_t>(j)] <= 0) continue;
    // Lowering p_j forces every slot reached through binding edges to follow.
    std::vector<char> in_closure(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{j};
    in_closure[static_cast<std::size_t>(j)] = 1;
    bool blocked = false;
    while (!stack.empty() && !blocked) {
      const int s = stack.back();
      stack.pop_back();
      if (duals.p[static_cast<std::size_t>(s)] < epsilon) {
        blocked = true;
        break;
      }
      for (int t = 0; t < inst.num_types() && !blocked; ++t) {
        for (int r = 0; r < inst.num_ads(t); ++r) {
          const AdRef ad{t, r};
          if (m.at(s) == ad) continue;
          const double slack = duals.u[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] +
                               duals.p[static_cast<std::size_t>(s)] - edge_value(inst, ad, s);
          if (slack >= epsilon) continue;
          const auto home = m.slot_of(ad);
          if (!home) {
            blocked = true;
            break;
          }
          if (!in_closure[static_cast<std::size_t>(*home)]) {
            in_closure[static_cast<std::size_t>(*home)] = 1;
            stack.push_back(*home);
          }
        }
      }
    }
    if (!blocked) out.push_back(j);
  }
  return out;
}

enum class MechanismKind { kVcg, kReserve, kMyersonGreedy };

inline const char* to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kVcg: return "vcg";
    case MechanismKind::kReserve: return "reserve";
    case MechanismKind::kMyersonGreedy: return "myerson-greedy";
  }
  return "unknown";
}

// Allocation and payments in terms of bidder identities (reference ranks).
struct PricedOutcome {
  Matching assignment;
  std::vector<std::vector<double>> payments;  // per type, per bidder
  MechanismKind mechanism = MechanismKind::kVcg;
  double max_clamp = 0.0;  // largest negative payment rounded up to 0

  double payment(BidderId b) const {
    return payments[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
  }
  double quantity(const Instance& reference, BidderId b) const {
    const auto slot = assignment.slot_of(b);
    return slot ? reference.discount(b.type, *slot) : 0.0;
  }
};

// Per-bidder reserve prices, per type and bidder.
using ReserveVector = std::vector<std::vector<double>>;

inline ReserveVector zero_reserves(const Instance& inst) {
  ReserveVector r;
  for (const auto& spec : inst.types) r.emplace_back(spec.values.size(), 0.0);
  return r;
}

using ExactAllocator = std::function<OptimalSolution(const Instance&)>;

inline OptimalSolution default_exact_allocator(const Instance& inst) { return solve_adtypes(inst); }

namespace detail {

inline PricedOutcome empty_outcome(const BidProfile& profile, MechanismKind kind) {
  PricedOutcome out;
  out.assignment = Matching(profile.reference.num_slots);
  for (const auto& b : profile.bids) out.payments.emplace_back(b.size(), 0.0);
  out.mechanism = kind;
  return out;
}

inline void record_assignment(PricedOutcome& out, const RealizedInstance& realized, const Matching& m) {
  for (int j = 0; j < m.num_slots(); ++j)
    if (const auto& ad = m.at(j))
      if (const auto bidder = realized.bidder_at(*ad)) out.assignment.assign(j, *bidder);
}

inline void set_payment(PricedOutcome& out, BidderId b, double amount) {
  if (amount < 0) {
    out.max_clamp = std::max(out.max_clamp, -amount);
    amount = 0;
  }
  out.payments[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)] = amount;
}

inline OptimalSolution certified(const ExactAllocator& allocator, const Instance& inst) {
  auto sol = allocator(inst);
  if (const auto cert = certify(inst, sol); !cert.pass)
    throw ValidationError("allocator is not an exact welfare maximizer: " + cert.message);
  return sol;
}

inline BidProfile filtered(const BidProfile& profile, const ReserveVector& reserves) {
  BidProfile out = profile;
  for (const BidderId b : profile.bidders())
    if (profile.bid(b) < reserves[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)])
      out.set_active(b, false);
  return out;
}

}  // namespace detail

// VCG auction on a bid profile: optimal allocation, winners pay the VCG price
// of their slot.
inline PricedOutcome run_vcg(const BidProfile& profile) {
  const auto realized = realize(profile);
  const auto sol = solve_adtypes(realized.inst);
  const auto prices = vcg_prices_fast(realized.inst, sol).p;
  auto out = detail::empty_outcome(profile, MechanismKind::kVcg);
  detail::record_assignment(out, realized, sol.matching);
  for (int j = 0; j < realized.inst.num_slots; ++j)
    if (const auto& ad = sol.matching.at(j))
      if (const auto bidder = realized.bidder_at(*ad))
        detail::set_payment(out, *bidder, prices[static_cast<std::size_t>(j)]);
  return out;
}

// Welfare-maximizing allocation among bidders meeting their reserve, priced
// by comparing against each winner bidding its reserve.
inline PricedOutcome price_with_reserves(const BidProfile& profile, const ReserveVector& reserves,
                                         const ExactAllocator& allocator = default_exact_allocator) {
  const BidProfile eligible = detail::filtered(profile, reserves);
  const auto realized = realize(eligible);
  require_valid(realized.inst);
  require_no_gap_rules(realized.inst, "price_with_reserves");
  const auto omega = detail::certified(allocator, realized.inst);
  auto out = detail::empty_outcome(profile, MechanismKind::kReserve);
  detail::record_assignment(out, realized, omega.matching);
  for (const BidderId b : eligible.bidders()) {
    if (!eligible.is_active(b)) continue;
    const double bid = eligible.bid(b);
    const double reserve = reserves[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
    const double others = omega.welfare - bid * realized.quantity(omega.matching, b);

    BidProfile at_reserve = eligible;
    at_reserve.set_bid(b, reserve);
    const auto realized_r = realize(at_reserve);
    const auto omega_r = detail::certified(allocator, realized_r.inst);
    const double x_r = realized_r.quantity(omega_r.matching, b);
    const double others_r = omega_r.welfare - reserve * x_r;
    detail::set_payment(out, b, others_r - others + x_r * reserve);
  }
  return out;
}

inline PricedOutcome price_with_reserves(const Instance& inst, const ReserveVector& reserves,
                                         const ExactAllocator& allocator = default_exact_allocator) {
  require_valid(inst);
  return price_with_reserves(BidProfile::truthful(inst), reserves, allocator);
}

class NonMonotoneAllocation : public Error {
 public:
  NonMonotoneAllocation(double low_bid, double high_bid)
      : Error("allocation curve decreases between bids " + std::to_string(low_bid) + " and " +
              std::to_string(high_bid)),
        low(low_bid), high(high_bid) {}
  double low;
  double high;
};

enum class AllocatorKind { kExact, kGreedy };

// Bids at which the optimal allocation for `bidder` may change: pairwise
// crossings of the lines t * alpha_s + (others' optimum with the bidder fixed
// at slot s), including the line for not being allocated.
inline std::vector<double> exact_candidate_bids(const BidProfile& profile, BidderId bidder) {
  BidProfile others = profile;
  others.set_active(bidder, false);
  const auto realized = realize(others);
  const Instance& base = realized.inst;
  struct Line {
    double slope;
    double offset;
  };
  std::vector<Line> lines{{0.0, solve_adtypes(base).welfare}};
  for (int s = 0; s < base.num_slots; ++s) {
    Instance rest = base;
    rest.num_slots = base.num_slots - 1;
    double offset = 0.0;
    if (rest.num_slots > 0) {
      for (auto& spec : rest.types) spec.discounts.erase(spec.discounts.begin() + s);
      offset = solve_adtypes(normalize_instance(std::move(rest))).welfare;
    }
    lines.push_back({base.discount(bidder.type, s), offset});
  }
  std::vector<double> out{0.0, profile.bid(bidder)};
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b)
      if (lines[a].slope != lines[b].slope)
        out.push_back((lines[b].offset - lines[a].offset) / (lines[a].slope - lines[b].slope));
  return out;
}

// Payment of `bidder` from the payment identity: bid * x(bid) minus the
// integral of its allocation curve from the reserve to the bid. The curve is
// found by sweeping the bid over analytic breakpoints.
inline double myerson_changepoint_price(const BidProfile& profile, BidderId bidder, double reserve,
                                        AllocatorKind kind) {
  const double bid = profile.bid(bidder);
  if (bid < reserve) return 0.0;
  MatchingAllocator allocator;
  std::vector<double> candidates;
  if (kind == AllocatorKind::kExact) {
    allocator = [](const Instance& inst) { return solve_adtypes(inst).matching; };
    candidates = exact_candidate_bids(profile, bidder);
  } else {
    allocator = [](const Instance& inst) { return solve_greedy(inst); };
    candidates = greedy_candidate_bids(profile, bidder);
  }
  candidates.push_back(reserve);
  const auto curve = sweep_allocation_curve(profile, bidder, allocator, std::move(candidates));
  if (const auto bad = curve.monotonicity_violation()) throw NonMonotoneAllocation(bad->first, bad->second);
  const double x = allocated_quantity(profile, bidder, bid, allocator);
  return bid * x - curve.integral(reserve, bid);
}

inline double myerson_changepoint_price(const Instance& inst, AdRef ad, double reserve, AllocatorKind kind) {
  require_valid(inst);
  require_no_gap_rules(inst, "myerson_changepoint_price");
  return myerson_changepoint_price(BidProfile::truthful(inst), ad, reserve, kind);
}

// Greedy allocation among bidders meeting their reserve, with payments from
// the payment identity on greedy's allocation curve.
inline PricedOutcome price_greedy_myerson(const BidProfile& profile, const ReserveVector& reserves) {
  const BidProfile eligible = detail::filtered(profile, reserves);
  const auto realized = realize(eligible);
  require_valid(realized.inst);
  require_no_gap_rules(realized.inst, "price_greedy_myerson");
  const auto m = solve_greedy(realized.inst);
  auto out = detail::empty_outcome(profile, MechanismKind::kMyersonGreedy);
  detail::record_assignment(out, realized, m);
  for (const BidderId b : eligible.bidders()) {
    if (!eligible.is_active(b) || realized.quantity(m, b) == 0.0) continue;
    const double reserve = reserves[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
    detail::set_payment(out, b, myerson_changepoint_price(eligible, b, reserve, AllocatorKind::kGreedy));
  }
  return out;
}

using Mechanism = std::function<PricedOutcome(const BidProfile&)>;

inline Mechanism vcg_mechanism() { return run_vcg; }
inline Mechanism reserve_mechanism(ReserveVector reserves) {
  return [reserves = std::move(reserves)](const BidProfile& p) { return price_with_reserves(p, reserves); };
}
inline Mechanism myerson_greedy_mechanism(ReserveVector reserves) {
  return [reserves = std::move(reserves)](const BidProfile& p) { return price_greedy_myerson(p, reserves); };
}

struct DeviationReport {
  struct Deviation {
    double bid;
    double utility;
  };
  double truthful_utility = 0.0;
  std::vector<Deviation> profitable;
  bool ok() const { return profitable.empty(); }
};

inline double utility_of(const Instance& reference, const PricedOutcome& outcome, BidderId b, double value) {
  return value * outcome.quantity(reference, b) - outcome.payment(b);
}

// Compares the bidder's truthful utility against bidding each deviation, all
// other bids fixed at their values in `inst`.
inline DeviationReport test_ic_deviation(const Instance& inst, const Mechanism& mechanism, AdRef ad,
                                         const std::vector<double>& deviations,
                                         double tolerance = kTolerance) {
  const auto truthful = BidProfile::truthful(inst);
  const double value = truthful.bid(ad);
  DeviationReport report;
  report.truthful_utility = utility_of(inst, mechanism(truthful), ad, value);
  for (double bid : deviations) {
    BidProfile lie = truthful;
    lie.set_bid(ad, bid);
    const double u = utility_of(inst, mechanism(lie), ad, value);
    if (u > report.truthful_utility + tolerance) report.profitable.push_back({bid, u});
  }
  return report;
}

// Deviation bids for an audit: 0, the value itself scaled, and uniform draws
// on [0, 2 * max(value, top bid)].
inline std::vector<double> sample_deviations(const Instance& inst, AdRef ad, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double top = inst.value(ad);
  for (const auto& spec : inst.types)
    if (!spec.values.empty()) top = std::max(top, spec.values.front());
  top = std::max(top, 1.0);
  std::vector<double> out{0.0, inst.value(ad) / 2, inst.value(ad) * 2, top, top * 2};
  std::uniform_real_distribution<double> draw(0.0, 2 * top);
  while (static_cast<int>(out.size()) < count) out.push_back(draw(rng));
  out.resize(static_cast<std::size_t>(std::max(count, 0)));
  return out;
}

}  // namespace adtypes
