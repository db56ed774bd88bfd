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

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <ostream>

#include "adtypes/core.hpp"

namespace adtypes {

// A weight w0 + w1*d + w2*d^2 for an infinitesimal d > 0, ordered
// lexicographically. Used to make values and discounts strictly decreasing
// within every type without changing which matchings are optimal.
struct Perturbed {
  double base = 0.0;
  double first = 0.0;
  double second = 0.0;

  friend Perturbed operator+(Perturbed a, Perturbed b) {
    return {a.base + b.base, a.first + b.first, a.second + b.second};
  }
  friend Perturbed operator-(Perturbed a, Perturbed b) {
    return {a.base - b.base, a.first - b.first, a.second - b.second};
  }
  Perturbed& operator+=(Perturbed b) { return *this = *this + b; }
  Perturbed& operator-=(Perturbed b) { return *this = *this - b; }

  friend std::partial_ordering operator<=>(const Perturbed& a, const Perturbed& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    if (auto c = a.first <=> b.first; c != 0) return c;
    return a.second <=> b.second;
  }
  friend bool operator==(const Perturbed&, const Perturbed&) = default;

  friend std::ostream& operator<<(std::ostream& out, const Perturbed& w) {
    return out << w.base << '+' << w.first << "d+" << w.second << "d^2";
  }
};

// Lexicographic order that treats components closer than a per-component
// tolerance as equal, so rounding left over from sums of weights falls
// through to the next order of d.
struct PerturbedOrder {
  Perturbed tolerance;

  int compare(const Perturbed& a, const Perturbed& b) const {
    const auto cmp = [](double x, double y, double tol) { return x < y - tol ? -1 : (x > y + tol ? 1 : 0); };
    if (int c = cmp(a.base, b.base, tolerance.base); c != 0) return c;
    if (int c = cmp(a.first, b.first, tolerance.first); c != 0) return c;
    return cmp(a.second, b.second, tolerance.second);
  }
  bool less(const Perturbed& a, const Perturbed& b) const { return compare(a, b) < 0; }
  bool operator()(const Perturbed& a, const Perturbed& b) const { return less(a, b); }
};

// Edge weight with discount a_j + (n-j)d and value v_r + (n-r)d.
inline Perturbed perturbed_edge(const Instance& inst, AdRef ad, int slot) {
  const double n = inst.num_slots;
  const double alpha = inst.discount(ad.type, slot);
  const double value = inst.value(ad);
  const double slot_bonus = n - slot;
  const double rank_bonus = n - ad.rank;
  return {alpha * value, alpha * rank_bonus + value * slot_bonus, slot_bonus * rank_bonus};
}

// Tolerances scaled by the largest weight of each order: values and discounts
// are non-increasing, so the rank-0 ads at slot 0 bound every edge.
inline PerturbedOrder perturbed_order(const Instance& inst, double relative = 1e-11) {
  const double n = inst.num_slots;
  double alpha = 0.0, value = 0.0, product = 0.0;
  for (int t = 0; t < inst.num_types(); ++t) {
    if (inst.num_slots == 0 || inst.num_ads(t) == 0) continue;
    const double a = std::abs(inst.discount(t, 0));
    const double v = std::abs(inst.value({t, 0}));
    alpha = std::max(alpha, a);
    value = std::max(value, v);
    product = std::max(product, a * v);
  }
  const double first = alpha * n + value * n;
  const double second = n * n;
  return {{relative * std::max(1.0, product), relative * std::max(1.0, first), relative * std::max(1.0, second)}};
}

}  // namespace adtypes
