#pragma once

#include <vector>

#include "gridroute/grid.hpp"

namespace gridroute {

/// A connected acyclic subgraph of the compressed grid spanning one net.
struct RoutingTree {
  int net = -1;
  std::vector<int> vertices; // compressed vertex ids, ascending
  std::vector<int> edges;    // compressed boundary edge ids, ascending

  double wirelength(const GridGraph& g1) const;

  friend bool operator==(const RoutingTree&, const RoutingTree&) = default;
};

/// 1-layer routing result for all nets plus the per-edge demand it induces.
struct CompressedSolution {
  std::vector<RoutingTree> trees; // indexed by net id
  std::vector<int> demand_map;    // indexed by compressed edge id
};

enum class RouterKind { Kruskal, Steiner };

/// Shortest grid path from u to v as a list of edge ids. Unit lengths make
/// the length the Manhattan distance; ties resolve by walking x before y.
std::vector<int> shortest_path(const GridGraph& g1, int u, int v);

/// Metric-closure MST routing: Kruskal over the pairwise Manhattan closure
/// of the distinct pin positions, each MST edge embedded as a grid path,
/// cycles from merged paths removed. `pin_vertices` must be distinct.
RoutingTree route_net_kruskal(const GridGraph& g1, int net,
                              const std::vector<int>& pin_vertices);

/// KMB Steiner routing: closure MST, path expansion, spanning tree of the
/// expansion, then repeated pruning of non-terminal leaves. Wirelength is
/// within 2(1-1/l) of the optimal Steiner tree.
RoutingTree route_net_steiner(const GridGraph& g1, int net,
                              const std::vector<int>& pin_vertices);

/// Routes every net in ascending id order, congestion-blind, accumulating
/// demand. Overflow on compressed edges is permitted by design.
CompressedSolution route_all(const GridGraph& g1, const std::vector<Net>& nets,
                             RouterKind router);

} // namespace gridroute
