#pragma once

// Independent brute-force oracles used by the unit and acceptance suites.
// Everything here enumerates exhaustively and shares no code path with the
// implementations it checks.

#include <utility>
#include <vector>

#include "gridroute/grid.hpp"
#include "gridroute/layer_assign.hpp"
#include "gridroute/route2d.hpp"

namespace gridroute::testing {

/// Optimal Steiner tree wirelength for terminals on a 1-layer grid, by
/// enumerating every boundary-edge subset. Grids up to ~12 edges only.
double steiner_opt_bruteforce(const GridGraph& g1,
                              const std::vector<int>& terminals);

struct AssignmentCost {
  long long overflow_added = 0;
  int via_count = 0;

  friend auto operator<=>(const AssignmentCost&, const AssignmentCost&) = default;
};

/// Lexicographically minimal (overflow added, via count) over every layer
/// assignment of the tree's edges, pins included in each column span.
/// k^|edges| enumeration; keep trees small.
AssignmentCost enumerate_best_assignment(const RoutingTree& t, const GridGraph& gk,
                                         const std::vector<int>& base_demand);

/// Cost actually realized by an AssignedTree against the pre-assignment state.
AssignmentCost realized_cost(const AssignedTree& a, const GridGraph& gk,
                             const std::vector<int>& base_demand);

/// True when the lifted boundary edges plus via edges form one connected
/// component that contains every pin of the tree's net at its true layer.
bool assigned_tree_connected(const AssignedTree& a, const GridGraph& gk);

} // namespace gridroute::testing
