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

// JSON interchange for instances, solutions, priced outcomes and reserves.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adtypes/core.hpp"
#include "adtypes/hungarian.hpp"
#include "adtypes/pricing.hpp"
#include "json.hpp"

namespace adtypes {

using Json = nlohmann::ordered_json;

// Instance schema:
//   {"num_slots": int,
//    "types": [{"name": str, "values": [num], "discounts": [num]}],
//    "gap": [[int]] | null}
inline Json instance_to_json(const Instance& inst) {
  Json types = Json::array();
  for (const auto& spec : inst.types)
    types.push_back({{"name", spec.name}, {"values", spec.values}, {"discounts", spec.discounts}});
  Json out;
  out["num_slots"] = inst.num_slots;
  out["types"] = std::move(types);
  out["gap"] = inst.gap ? Json(*inst.gap) : Json(nullptr);
  return out;
}

// Parses and validates; short value lists are padded with zeros.
inline Instance instance_from_json(const Json& j) {
  Instance inst;
  try {
    inst.num_slots = j.at("num_slots").get<int>();
    for (const auto& t : j.at("types")) {
      TypeSpec spec;
      spec.name = t.value("name", std::string{});
      spec.values = t.at("values").get<std::vector<double>>();
      spec.discounts = t.at("discounts").get<std::vector<double>>();
      inst.types.push_back(std::move(spec));
    }
    if (j.contains("gap") && !j.at("gap").is_null()) inst.gap = j.at("gap").get<GapMatrix>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance json: ") + e.what());
  }
  const auto report = validate_instance(inst, {.require_normalized = false});
  if (!report.ok()) throw ValidationError(report.to_string());
  return normalize_instance(std::move(inst));
}

struct SolutionRecord {
  std::string algorithm;
  double welfare = 0.0;
  Matching matching;
  std::optional<DualSolution> duals;
};

inline Json matching_to_json(const Matching& m) {
  Json out = Json::array();
  for (int j = 0; j < m.num_slots(); ++j)
    if (const auto& ad = m.at(j)) out.push_back({{"slot", j}, {"type", ad->type}, {"rank", ad->rank}});
  return out;
}

inline Matching matching_from_json(const Json& j, int num_slots) {
  Matching m(num_slots);
  for (const auto& e : j) {
    const int slot = e.at("slot").get<int>();
    if (slot < 0 || slot >= num_slots) throw ValidationError("assignment slot out of range");
    if (m.at(slot)) throw ValidationError("slot " + std::to_string(slot) + " assigned twice");
    m.assign(slot, {e.at("type").get<int>(), e.at("rank").get<int>()});
  }
  return m;
}

inline Json solution_to_json(const SolutionRecord& sol) {
  Json out;
  out["algorithm"] = sol.algorithm;
  out["welfare"] = sol.welfare;
  out["assignment"] = matching_to_json(sol.matching);
  if (sol.duals)
    out["duals"] = {{"u", sol.duals->u}, {"p", sol.duals->p}};
  else
    out["duals"] = nullptr;
  return out;
}

inline SolutionRecord solution_from_json(const Json& j, int num_slots) {
  SolutionRecord sol;
  try {
    sol.algorithm = j.value("algorithm", std::string{});
    sol.welfare = j.at("welfare").get<double>();
    sol.matching = matching_from_json(j.at("assignment"), num_slots);
    if (j.contains("duals") && !j.at("duals").is_null()) {
      DualSolution d;
      d.u = j.at("duals").at("u").get<std::vector<std::vector<double>>>();
      d.p = j.at("duals").at("p").get<std::vector<double>>();
      sol.duals = std::move(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("solution json: ") + e.what());
  }
  return sol;
}

inline Json priced_to_json(const PricedOutcome& out) {
  Json payments = Json::array();
  for (std::size_t t = 0; t < out.payments.size(); ++t)
    for (std::size_t i = 0; i < out.payments[t].size(); ++i)
      if (out.assignment.slot_of({static_cast<int>(t), static_cast<int>(i)}))
        payments.push_back({{"type", t}, {"rank", i}, {"pay", out.payments[t][i]}});
  Json j;
  j["assignment"] = matching_to_json(out.assignment);
  j["payments"] = std::move(payments);
  j["mechanism"] = to_string(out.mechanism);
  return j;
}

// Accepts {"reserves": [[num]]} or a bare [[num]]; missing entries are 0.
inline ReserveVector reserves_from_json(const Json& j, const Instance& inst) {
  const Json& rows = j.is_object() ? j.at("reserves") : j;
  ReserveVector r = zero_reserves(inst);
  if (rows.size() > r.size()) throw ValidationError("reserves: more rows than types");
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto row = rows[t].get<std::vector<double>>();
    if (row.size() > r[t].size()) throw ValidationError("reserves: more entries than ads in type " + std::to_string(t));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < 0) throw ValidationError("reserves: negative reserve");
      r[t][i] = row[i];
    }
  }
  return r;
}

// Numbers are written in shortest round-trip form, which never needs more
// than 17 significant digits.
inline std::string dump_json(const Json& j) { return j.dump(2) + '\n'; }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace adtypes
