#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchmkt/market.hpp"
#include "matchmkt/rng.hpp"

namespace testutil {

inline matchmkt::MarketConfig small_market(int na, int nj,
                                           std::uint64_t seed) {
  matchmkt::MarketConfig mc;
  mc.n_applicants = na;
  mc.n_firms = nj;
  mc.pre_dist = matchmkt::ScoreDistribution::uniform(-1.0, 1.0);
  mc.post_dist = matchmkt::ScoreDistribution::uniform(-1.0, 1.0);
  mc.seed = seed;
  return mc;
}

/// Bipartite Erdos-Renyi style edge set: each (a, j) kept when a keyed
/// draw clears the density threshold. Guarantees nothing about
/// connectivity.
inline std::vector<std::pair<int, int>> random_edges(int na, int nj,
                                                     double density,
                                                     std::uint64_t seed) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < na; ++a)
    for (int j = 0; j < nj; ++j) {
      matchmkt::Stream s(seed, matchmkt::StreamRole::Internal,
                         static_cast<std::uint64_t>(a),
                         static_cast<std::uint64_t>(j));
      if (s.next_double() < density) edges.emplace_back(a, j);
    }
  return edges;
}

/// Random bipartite tree on na + nj vertices: vertices join in a random
/// interleaved order, each attaching to a uniformly drawn earlier
/// vertex from the opposite side. Always connected, always a tree.
inline std::vector<std::pair<int, int>> random_bipartite_tree(
    int na, int nj, std::uint64_t seed) {
  matchmkt::Stream s(seed, matchmkt::StreamRole::Internal, 0, 1);
  std::vector<int> apps, firms;  // vertices already in the tree
  std::vector<std::pair<int, int>> edges;
  int next_a = 0, next_j = 0;
  apps.push_back(next_a++);
  while (next_a < na || next_j < nj) {
    bool add_firm;
    if (next_j >= nj)
      add_firm = false;
    else if (next_a >= na)
      add_firm = true;
    else
      add_firm = (s.next_u64() & 1) != 0;
    if (add_firm) {
      int a = apps[s.next_u64() % apps.size()];
      edges.emplace_back(a, next_j);
      firms.push_back(next_j++);
    } else {
      if (firms.empty()) {
        // No firm yet; must add one first.
        edges.emplace_back(apps[0], next_j);
        firms.push_back(next_j++);
        continue;
      }
      int j = firms[s.next_u64() % firms.size()];
      edges.emplace_back(next_a, j);
      apps.push_back(next_a++);
    }
  }
  return edges;
}

}  // namespace testutil
