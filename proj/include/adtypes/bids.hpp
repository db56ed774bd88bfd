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

// Bidders as strategic agents. A bidder is identified by its rank in a
// reference instance; when bids change, each type is re-sorted by
// (bid desc, bidder index asc) and the ranks of the realized instance map back
// to bidder identities.

#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "adtypes/core.hpp"

namespace adtypes {

using BidderId = AdRef;

struct BidProfile {
  Instance reference;
  std::vector<std::vector<double>> bids;  // per type, per bidder
  std::vector<std::vector<char>> active;  // excluded bidders take no part

  // Truthful profile of `inst`: every ad bids its value.
  static BidProfile truthful(const Instance& inst) {
    BidProfile profile{inst, {}, {}};
    for (const auto& spec : inst.types) {
      profile.bids.push_back(spec.values);
      profile.active.emplace_back(spec.values.size(), 1);
    }
    return profile;
  }

  double bid(BidderId b) const {
    return bids[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
  }
  void set_bid(BidderId b, double value) {
    bids[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)] = value;
  }
  bool is_active(BidderId b) const {
    return active[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)] != 0;
  }
  void set_active(BidderId b, bool on) {
    active[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)] = on ? 1 : 0;
  }
  std::vector<BidderId> bidders() const {
    std::vector<BidderId> out;
    for (int t = 0; t < static_cast<int>(bids.size()); ++t)
      for (int i = 0; i < static_cast<int>(bids[static_cast<std::size_t>(t)].size()); ++i)
        out.push_back({t, i});
    return out;
  }
};

// An instance built from a bid profile plus the rank <-> bidder maps.
struct RealizedInstance {
  Instance inst;
  std::vector<std::vector<int>> bidder_at_rank;  // -1 for padding
  std::vector<std::vector<int>> rank_of_bidder;  // -1 when inactive

  std::optional<int> slot_of(const Matching& m, BidderId b) const {
    const int rank = rank_of_bidder[static_cast<std::size_t>(b.type)][static_cast<std::size_t>(b.rank)];
    if (rank < 0) return std::nullopt;
    return m.slot_of({b.type, rank});
  }
  // Discount received by bidder `b` under `m` (0 when unallocated).
  double quantity(const Matching& m, BidderId b) const {
    const auto slot = slot_of(m, b);
    return slot ? inst.discount(b.type, *slot) : 0.0;
  }
  std::optional<BidderId> bidder_at(AdRef ad) const {
    const int b = bidder_at_rank[static_cast<std::size_t>(ad.type)][static_cast<std::size_t>(ad.rank)];
    if (b < 0) return std::nullopt;
    return BidderId{ad.type, b};
  }
};

inline RealizedInstance realize(const BidProfile& profile) {
  RealizedInstance out;
  out.inst.num_slots = profile.reference.num_slots;
  out.inst.gap = profile.reference.gap;
  const auto n = static_cast<std::size_t>(out.inst.num_slots);
  for (std::size_t t = 0; t < profile.bids.size(); ++t) {
    const auto& bids = profile.bids[t];
    std::vector<int> order;
    for (int i = 0; i < static_cast<int>(bids.size()); ++i)
      if (profile.active[t][static_cast<std::size_t>(i)]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return bids[static_cast<std::size_t>(a)] > bids[static_cast<std::size_t>(b)];
    });
    TypeSpec spec{profile.reference.types[t].name, {}, profile.reference.types[t].discounts};
    std::vector<int> at_rank(n, -1);
    std::vector<int> of_bidder(bids.size(), -1);
    for (std::size_t r = 0; r < order.size() && r < n; ++r) {
      spec.values.push_back(bids[static_cast<std::size_t>(order[r])]);
      at_rank[r] = order[r];
      of_bidder[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
    }
    spec.values.resize(n, 0.0);
    out.inst.types.push_back(std::move(spec));
    out.bidder_at_rank.push_back(std::move(at_rank));
    out.rank_of_bidder.push_back(std::move(of_bidder));
  }
  return out;
}

}  // namespace adtypes
