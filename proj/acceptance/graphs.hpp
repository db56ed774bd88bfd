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

// Small-graph enumeration: every labelled graph, or one representative per
// isomorphism class.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "adtypes/gapdp.hpp"

namespace adtypes::acceptance {

// Adjacency as one bit mask per vertex.
using Adjacency = std::vector<std::uint32_t>;

inline Graph to_graph(const Adjacency& adj) {
  Graph g{static_cast<int>(adj.size()), {}};
  for (int u = 0; u < g.vertices; ++u)
    for (int v = u + 1; v < g.vertices; ++v)
      if (adj[static_cast<std::size_t>(u)] >> v & 1u) g.edges.emplace_back(u, v);
  return g;
}

inline std::vector<Adjacency> labelled_graphs(int vertices) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v) pairs.emplace_back(u, v);
  std::vector<Adjacency> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs.size()); ++bits) {
    Adjacency adj(static_cast<std::size_t>(vertices), 0);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (bits >> e & 1u) {
        adj[static_cast<std::size_t>(pairs[e].first)] |= 1u << pairs[e].second;
        adj[static_cast<std::size_t>(pairs[e].second)] |= 1u << pairs[e].first;
      }
    out.push_back(std::move(adj));
  }
  return out;
}

// Upper triangle of the relabelled adjacency, read row by row.
inline std::uint64_t code_under(const Adjacency& adj, const std::vector<int>& order) {
  const int n = static_cast<int>(adj.size());
  std::uint64_t code = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      code = code << 1 | (adj[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])] >>
                              order[static_cast<std::size_t>(b)] & 1u);
  return code;
}

// Canonical code: colour refinement splits the vertices into cells, then the
// largest code over orderings that keep the cells in sequence is taken.
inline std::uint64_t canonical_code(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> colour(static_cast<std::size_t>(n), 0);
  for (int round = 0; round < n; ++round) {
    std::map<std::pair<int, std::vector<int>>, int> signature_ids;
    std::vector<std::pair<int, std::vector<int>>> signatures;
    for (int v = 0; v < n; ++v) {
      std::vector<int> around;
      for (int w = 0; w < n; ++w)
        if (adj[static_cast<std::size_t>(v)] >> w & 1u) around.push_back(colour[static_cast<std::size_t>(w)]);
      std::sort(around.begin(), around.end());
      signatures.emplace_back(colour[static_cast<std::size_t>(v)], std::move(around));
    }
    for (const auto& s : signatures) signature_ids.emplace(s, 0);
    int next = 0;
    for (auto& [sig, id] : signature_ids) id = next++;
    std::vector<int> refined(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) refined[static_cast<std::size_t>(v)] = signature_ids.at(signatures[static_cast<std::size_t>(v)]);
    if (refined == colour) break;
    colour = std::move(refined);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair{colour[static_cast<std::size_t>(a)], a} < std::pair{colour[static_cast<std::size_t>(b)], b};
  });
  // Cell boundaries in `order`.
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && colour[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] ==
                        colour[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      ++j;
    cells.emplace_back(i, j);
    i = j;
  }
  std::uint64_t best = 0;
  // Odometer over the permutations of every cell.
  while (true) {
    best = std::max(best, code_under(adj, order));
    std::size_t c = 0;
    for (; c < cells.size(); ++c) {
      auto first = order.begin() + cells[c].first;
      auto last = order.begin() + cells[c].second;
      if (std::next_permutation(first, last)) break;
    }
    if (c == cells.size()) break;
  }
  return best;
}

// One representative per isomorphism class on `vertices` vertices, grown
// from the classes on one vertex fewer by adding a vertex with every
// neighbourhood.
inline std::vector<Adjacency> graph_classes(int vertices) {
  std::vector<Adjacency> classes{Adjacency{}};
  for (int n = 1; n <= vertices; ++n) {
    std::vector<Adjacency> grown;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& base : classes) {
      for (std::uint32_t nbrs = 0; nbrs < (1u << (n - 1)); ++nbrs) {
        Adjacency adj = base;
        adj.push_back(nbrs);
        for (int v = 0; v < n - 1; ++v)
          if (nbrs >> v & 1u) adj[static_cast<std::size_t>(v)] |= 1u << (n - 1);
        if (seen.insert(canonical_code(adj) ^ (std::uint64_t{1} << 63)).second) grown.push_back(std::move(adj));
      }
    }
    classes = std::move(grown);
  }
  return classes;
}

}  // namespace adtypes::acceptance
