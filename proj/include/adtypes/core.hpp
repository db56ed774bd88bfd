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

// Problem representation shared by every solver: ad types with sorted value
// lists and discount curves over a common slot order, an optional gap matrix,
// and partial slot -> ad matchings.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace adtypes {

// Absolute tolerance used for certificate checks on non-exact inputs.
inline constexpr double kTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The instance is malformed or violates a solver precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A size guard of an exponential or oracle solver refused the instance.
class GuardRefusal : public Error {
 public:
  using Error::Error;
};

struct AdTypeId {
  int index = 0;
  friend auto operator<=>(const AdTypeId&, const AdTypeId&) = default;
};

// Ad `rank` of a type; rank 0 is the highest value of that type.
struct AdRef {
  int type = 0;
  int rank = 0;
  friend auto operator<=>(const AdRef&, const AdRef&) = default;
};

struct TypeSpec {
  std::string name;
  std::vector<double> values;     // value per conversion, non-increasing
  std::vector<double> discounts;  // per-slot conversion rate, non-increasing
};

// G[a][b]: after a type-a ad at slot j, slots j+1 .. j+G[a][b] may not hold a
// type-b ad.
using GapMatrix = std::vector<std::vector<int>>;

struct Instance {
  int num_slots = 0;
  std::vector<TypeSpec> types;
  std::optional<GapMatrix> gap;

  int num_types() const { return static_cast<int>(types.size()); }
  int num_ads(int type) const {
    return static_cast<int>(types[static_cast<std::size_t>(type)].values.size());
  }
  int total_ads() const {
    int total = 0;
    for (const auto& t : types) total += static_cast<int>(t.values.size());
    return total;
  }
  double value(AdRef ad) const {
    return types[static_cast<std::size_t>(ad.type)].values[static_cast<std::size_t>(ad.rank)];
  }
  double discount(int type, int slot) const {
    return types[static_cast<std::size_t>(type)].discounts[static_cast<std::size_t>(slot)];
  }
  bool has_gap_rules() const {
    if (!gap) return false;
    for (const auto& row : *gap)
      for (int g : row)
        if (g != 0) return true;
    return false;
  }
  int gap_between(int from_type, int to_type) const {
    if (!gap) return 0;
    return (*gap)[static_cast<std::size_t>(from_type)][static_cast<std::size_t>(to_type)];
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  // Non-fatal findings, e.g. a discount above 1.
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  std::string to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) out << "violation: " << v << '\n';
    for (const auto& w : warnings) out << "warning: " << w << '\n';
    return out.str();
  }
};

struct ValidationOptions {
  // When false, value lists of any length are accepted (they are padded or
  // truncated by normalize_instance).
  bool require_normalized = true;
};

inline ValidationReport validate_instance(const Instance& inst,
                                          ValidationOptions options = {}) {
  ValidationReport report;
  auto& bad = report.violations;
  if (inst.num_slots < 1) bad.push_back("num_slots must be at least 1");
  if (inst.types.empty()) bad.push_back("at least one ad type is required");
  const auto n = static_cast<std::size_t>(std::max(inst.num_slots, 0));
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    const std::string who = "type " + std::to_string(t) +
                            (spec.name.empty() ? "" : " (" + spec.name + ")");
    if (options.require_normalized && spec.values.size() != n)
      bad.push_back(who + ": has " + std::to_string(spec.values.size()) +
                    " values, expected " + std::to_string(n));
    if (spec.discounts.size() != n)
      bad.push_back(who + ": has " + std::to_string(spec.discounts.size()) +
                    " discounts, expected " + std::to_string(n));
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      if (!std::isfinite(spec.values[i]) || spec.values[i] < 0) {
        bad.push_back(who + ": negative or non-finite value at rank " + std::to_string(i));
        break;
      }
    }
    if (!std::is_sorted(spec.values.begin(), spec.values.end(), std::greater<>{}))
      bad.push_back(who + ": values not non-increasing");
    bool above_one = false;
    for (std::size_t j = 0; j < spec.discounts.size(); ++j) {
      if (!std::isfinite(spec.discounts[j]) || spec.discounts[j] < 0) {
        bad.push_back(who + ": negative or non-finite discount at slot " + std::to_string(j));
        break;
      }
      above_one = above_one || spec.discounts[j] > 1.0;
    }
    if (above_one) report.warnings.push_back(who + ": discount above 1");
    if (!std::is_sorted(spec.discounts.begin(), spec.discounts.end(), std::greater<>{}))
      bad.push_back(who + ": discounts not non-increasing");
  }
  if (inst.gap) {
    const auto k = inst.types.size();
    bool square = inst.gap->size() == k;
    for (const auto& row : *inst.gap) square = square && row.size() == k;
    if (!square) {
      bad.push_back("gap matrix not k x k");
    } else {
      for (const auto& row : *inst.gap)
        if (std::any_of(row.begin(), row.end(), [](int g) { return g < 0; })) {
          bad.push_back("gap matrix has a negative entry");
          break;
        }
    }
  }
  return report;
}

inline void require_valid(const Instance& inst) {
  const auto report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("invalid instance:\n" + report.to_string());
}

inline void require_no_gap_rules(const Instance& inst, const char* solver) {
  if (inst.has_gap_rules())
    throw ValidationError(std::string(solver) +
                          ": instance has gap rules; use gapdp");
}

// Pads every type with zero-value ads up to num_slots and drops ads beyond the
// num_slots highest-valued ones.
inline Instance normalize_instance(Instance inst) {
  const auto n = static_cast<std::size_t>(std::max(inst.num_slots, 0));
  for (auto& spec : inst.types) spec.values.resize(n, 0.0);
  return inst;
}

inline double edge_value(const Instance& inst, AdRef ad, int slot) {
  if (ad.type < 0 || ad.type >= inst.num_types())
    throw std::out_of_range("edge_value: ad type out of range");
  if (ad.rank < 0 || ad.rank >= inst.num_ads(ad.type))
    throw std::out_of_range("edge_value: ad rank out of range");
  if (slot < 0 || slot >= inst.num_slots)
    throw std::out_of_range("edge_value: slot out of range");
  return inst.discount(ad.type, slot) * inst.value(ad);
}

// Strict total order on edges shared by every solver: higher value first, then
// lower slot, lower type, lower rank.
struct EdgeOrder {
  static bool before(double value_a, int slot_a, AdRef ad_a,
                     double value_b, int slot_b, AdRef ad_b) {
    if (value_a != value_b) return value_a > value_b;
    return std::tie(slot_a, ad_a.type, ad_a.rank) < std::tie(slot_b, ad_b.type, ad_b.rank);
  }
};

// Partial assignment slot -> ad.
class Matching {
 public:
  Matching() = default;
  explicit Matching(int num_slots) : slots_(static_cast<std::size_t>(num_slots)) {}

  int num_slots() const { return static_cast<int>(slots_.size()); }
  const std::optional<AdRef>& at(int slot) const { return slots_.at(static_cast<std::size_t>(slot)); }
  void assign(int slot, AdRef ad) { slots_.at(static_cast<std::size_t>(slot)) = ad; }
  void clear(int slot) { slots_.at(static_cast<std::size_t>(slot)).reset(); }
  int size() const {
    return static_cast<int>(std::count_if(slots_.begin(), slots_.end(),
                                          [](const auto& s) { return s.has_value(); }));
  }
  // Slot of `ad`, or nullopt.
  std::optional<int> slot_of(AdRef ad) const {
    for (std::size_t j = 0; j < slots_.size(); ++j)
      if (slots_[j] == ad) return static_cast<int>(j);
    return std::nullopt;
  }
  const std::vector<std::optional<AdRef>>& slots() const { return slots_; }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<std::optional<AdRef>> slots_;
};

// Throws ValidationError if the matching does not fit the instance or uses an
// ad twice.
inline void check_matching(const Instance& inst, const Matching& m) {
  if (m.num_slots() != inst.num_slots)
    throw ValidationError("matching has " + std::to_string(m.num_slots()) +
                          " slots, instance has " + std::to_string(inst.num_slots));
  std::vector<std::vector<char>> used(inst.types.size());
  for (std::size_t t = 0; t < inst.types.size(); ++t)
    used[t].assign(inst.types[t].values.size(), 0);
  for (int j = 0; j < m.num_slots(); ++j) {
    const auto& ad = m.at(j);
    if (!ad) continue;
    if (ad->type < 0 || ad->type >= inst.num_types() || ad->rank < 0 ||
        ad->rank >= inst.num_ads(ad->type))
      throw ValidationError("matching refers to an unknown ad at slot " + std::to_string(j));
    auto& flag = used[static_cast<std::size_t>(ad->type)][static_cast<std::size_t>(ad->rank)];
    if (flag)
      throw ValidationError("ad (type " + std::to_string(ad->type) + ", rank " +
                            std::to_string(ad->rank) + ") assigned twice");
    flag = 1;
  }
}

inline double welfare(const Instance& inst, const Matching& m) {
  check_matching(inst, m);
  double total = 0.0;
  for (int j = 0; j < m.num_slots(); ++j)
    if (const auto& ad = m.at(j)) total += edge_value(inst, *ad, j);
  return total;
}

// True when, for every type, assigned ads occupy slots in rank order.
inline bool within_type_rank_order(const Matching& m, int num_types) {
  std::vector<int> last_rank(static_cast<std::size_t>(num_types), -1);
  for (int j = 0; j < m.num_slots(); ++j) {
    const auto& ad = m.at(j);
    if (!ad) continue;
    auto& last = last_rank[static_cast<std::size_t>(ad->type)];
    if (ad->rank < last) return false;
    last = ad->rank;
  }
  return true;
}

}  // namespace adtypes
