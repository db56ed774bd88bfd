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

// Command-line front end: solve, price, gen, bench, verify.
//
// Exit codes: 0 success, 1 validation failure, 2 guard refusal, 64 usage.

#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adtypes/baseline.hpp"
#include "adtypes/bench.hpp"
#include "adtypes/gapdp.hpp"
#include "adtypes/hungarian.hpp"
#include "adtypes/io.hpp"
#include "adtypes/pricing.hpp"

namespace adtypes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitGuard = 2;
inline constexpr int kExitUsage = 64;

namespace detail {

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

inline SolutionRecord solve_with(const Instance& inst, const std::string& algo, std::ostream* trace) {
  SolutionRecord rec;
  rec.algorithm = algo;
  if (algo == "adtypes") {
    require_no_gap_rules(inst, "adtypes");
    SolveOptions options;
    options.trace = trace;
    auto sol = solve_adtypes(inst, options);
    rec.matching = std::move(sol.matching);
    rec.duals = std::move(sol.duals);
  } else if (algo == "generic") {
    require_no_gap_rules(inst, "generic");
    auto sol = solve_generic_hungarian(inst);
    rec.matching = std::move(sol.matching);
    rec.duals = std::move(sol.duals);
  } else if (algo == "greedy") {
    require_no_gap_rules(inst, "greedy");
    rec.matching = solve_greedy(inst);
  } else if (algo == "gapdp") {
    rec.matching = solve_gap_dp(inst).matching;
  } else if (algo == "brute") {
    rec.matching = inst.has_gap_rules() ? brute_force_gap(inst) : solve_bruteforce(inst);
  } else {
    rec.matching = solve_two_type_dp(inst);
  }
  rec.welfare = welfare(inst, rec.matching);
  return rec;
}

inline std::vector<std::pair<int, int>> parse_sizes(const std::string& text, int default_k) {
  std::vector<std::pair<int, int>> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto x = item.find('x');
    try {
      if (x == std::string::npos)
        sizes.emplace_back(std::stoi(item), default_k);
      else
        sizes.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--sizes", "expected n or nxk items, got '" + item + "'");
    }
    if (sizes.back().first < 1 || sizes.back().second < 1)
      throw CLI::ValidationError("--sizes", "sizes must be positive");
  }
  return sizes;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Ad types allocation: exact solvers, pricing and benchmarks", "adtypes"};
  app.require_subcommand(1, 1);

  std::string in_path;
  std::string out_path;

  auto* solve = app.add_subcommand("solve", "Compute an allocation");
  std::string algo = "adtypes";
  bool trace = false;
  solve->add_option("--in", in_path, "Instance JSON")->required();
  solve->add_option("--algo", algo, "Solver")
      ->check(CLI::IsMember({"adtypes", "generic", "greedy", "gapdp", "brute", "two-type"}));
  solve->add_option("--out", out_path, "Solution JSON (default stdout)");
  solve->add_flag("--trace", trace, "Per-phase trace on stderr (adtypes only)");

  auto* price = app.add_subcommand("price", "Compute payments");
  std::string mechanism = "vcg";
  std::string reserves_path;
  price->add_option("--in", in_path, "Instance JSON")->required();
  price->add_option("--mechanism", mechanism, "Mechanism")
      ->check(CLI::IsMember({"vcg", "reserve", "myerson-greedy"}));
  price->add_option("--reserves", reserves_path, "Reserves JSON");
  price->add_option("--out", out_path, "Priced outcome JSON (default stdout)");

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string family = "random";
  std::uint64_t seed = 1;
  int n = 8;
  int k = 3;
  double epsilon = 0.25;
  double density = 0.5;
  std::string graph_path;
  std::string values = "uniform-int";
  std::string discounts = "geometric";
  gen->add_option("--family", family, "Instance family")
      ->check(CLI::IsMember({"random", "greedy-tight", "mis", "assignment"}));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--n", n, "Slots (random, assignment) or vertices (mis)")->check(CLI::PositiveNumber);
  gen->add_option("--k", k, "Types (random)")->check(CLI::PositiveNumber);
  gen->add_option("--eps", epsilon, "Epsilon (greedy-tight)");
  gen->add_option("--density", density, "Edge probability (mis, without --graph)");
  gen->add_option("--graph", graph_path, "Edge-list graph file (mis)");
  gen->add_option("--values", values, "Value distribution (random)")
      ->check(CLI::IsMember({"uniform-int", "uniform-real", "pareto"}));
  gen->add_option("--discounts", discounts, "Discount family (random)")
      ->check(CLI::IsMember({"geometric", "linear", "step"}));
  gen->add_option("--out", out_path, "Instance JSON (default stdout)");

  auto* bench = app.add_subcommand("bench", "Time the exact solvers");
  std::string sizes = "100x4,200x4,400x4";
  int reps = 5;
  bench->add_option("--sizes", sizes, "Comma-separated n or nxk");
  bench->add_option("--reps", reps, "Repetitions per size")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "Random seed");
  bench->add_option("--out", out_path, "CSV report (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  std::string sol_path;
  verify->add_option("--in", in_path, "Instance JSON")->required();
  verify->add_option("--sol", sol_path, "Solution JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*solve) {
      const Instance inst = instance_from_json(read_json_file(in_path));
      const auto rec = detail::solve_with(inst, algo, trace ? &err : nullptr);
      detail::emit(out_path, dump_json(solution_to_json(rec)), out);
    } else if (*price) {
      const Instance inst = instance_from_json(read_json_file(in_path));
      const ReserveVector reserves =
          reserves_path.empty() ? zero_reserves(inst) : reserves_from_json(read_json_file(reserves_path), inst);
      const auto profile = BidProfile::truthful(inst);
      PricedOutcome priced;
      if (mechanism == "vcg") {
        require_no_gap_rules(inst, "vcg");
        priced = run_vcg(profile);
      } else if (mechanism == "reserve") {
        priced = price_with_reserves(profile, reserves);
      } else {
        require_no_gap_rules(inst, "myerson-greedy");
        priced = price_greedy_myerson(profile, reserves);
      }
      detail::emit(out_path, dump_json(priced_to_json(priced)), out);
    } else if (*gen) {
      Instance inst;
      std::optional<double> offset;
      if (family == "random") {
        const std::map<std::string, ValueDistribution> value_tags{
            {"uniform-int", ValueDistribution::kUniformInt},
            {"uniform-real", ValueDistribution::kUniformReal},
            {"pareto", ValueDistribution::kPareto}};
        const std::map<std::string, DiscountFamily> discount_tags{
            {"geometric", DiscountFamily::kGeometric},
            {"linear", DiscountFamily::kLinear},
            {"step", DiscountFamily::kStep}};
        inst = gen_random({n, k, seed, value_tags.at(values), discount_tags.at(discounts)});
      } else if (family == "greedy-tight") {
        inst = gen_greedy_tight(epsilon);
      } else if (family == "mis") {
        Graph g;
        if (graph_path.empty()) {
          g = gen_random_graph(n, density, seed);
        } else {
          std::ifstream graph_in(graph_path);
          if (!graph_in) throw ValidationError("cannot open " + graph_path);
          g = parse_graph(graph_in);
        }
        inst = mis_to_adtypes(g);
      } else {
        auto reduction = assignment_to_adtypes(gen_assignment_matrix(n, seed));
        inst = std::move(reduction.instance);
        offset = reduction.offset;
      }
      detail::emit(out_path, dump_json(instance_to_json(inst)), out);
      if (offset) {
        std::ostringstream line;
        line.precision(17);
        line << "offset=" << *offset << '\n';
        (out_path.empty() || out_path == "-" ? err : out) << line.str();
      }
    } else if (*bench) {
      BenchOptions options;
      options.reps = reps;
      options.seed = seed;
      const auto report = bench_scaling(detail::parse_sizes(sizes, 4), options);
      detail::emit(out_path, report.to_csv(), out);
    } else if (*verify) {
      const Instance inst = instance_from_json(read_json_file(in_path));
      const SolutionRecord rec = solution_from_json(read_json_file(sol_path), inst.num_slots);
      const double actual = welfare(inst, rec.matching);
      std::vector<std::string> problems;
      const double scale = std::max(1.0, std::abs(actual));
      if (std::abs(actual - rec.welfare) > kTolerance * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "reported welfare " << rec.welfare << " but assignment is worth " << actual;
        problems.push_back(msg.str());
      }
      if (inst.has_gap_rules() && !check_gap_feasible(inst, rec.matching))
        problems.emplace_back("assignment violates gap rules");
      if (rec.duals) {
        const auto cert = certify(inst, {rec.matching, *rec.duals, rec.welfare});
        if (!cert.pass) problems.push_back("certificate: " + cert.message);
      }
      if (!problems.empty()) {
        for (const auto& p : problems) err << "verify: " << p << '\n';
        return kExitInvalid;
      }
      out << (rec.duals ? "ok: certified optimal\n" : "ok: feasible (no duals to certify)\n");
    }
  } catch (const GuardRefusal& e) {
    err << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace adtypes::cli
