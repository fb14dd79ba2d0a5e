#pragma once

#include <utility>
#include <vector>

#include "gridroute/grid.hpp"
#include "gridroute/route2d.hpp"

namespace gridroute {

// A routing tree with its edges directed away from a source pin. Vertices
// are referenced by index into `vertex_ids` (ascending canonical order).
struct OrientedTree {
  int net = -1;
  std::vector<int> vertex_ids;
  int root = -1;                          // index into vertex_ids
  std::vector<int> parent;                // index; -1 at the root
  std::vector<std::vector<int>> children; // indices, ascending by vertex id
  std::vector<int> parent_edge;           // compressed boundary edge id; -1 at root
  std::vector<int> bfs_order;             // root first, children after parents
};

/// Orients t away from root_vertex. Throws std::invalid_argument when the
/// root is not a tree vertex. `g` may be the compressed grid or the k-layer
/// grid (their layer-1 ids coincide).
OrientedTree orient(const RoutingTree& t, int root_vertex, const GridGraph& g);

enum class AssignMode { Strict, OverflowMin };

/// One net lifted to the k-layer grid: every 2D tree edge carries a layer,
/// via edges stitch the columns together and reach the net's true pin layers.
struct AssignedTree {
  int net = -1;
  std::vector<std::pair<int, int>> edge_layer; // (compressed edge id, layer)
  std::vector<int> boundary_edges; // k-layer boundary edge ids, ascending
  std::vector<int> via_edges;      // k-layer via edge ids, ascending
};

/// Single-net optimal layer assignment. A bottom-up DP assigns each tree
/// edge a layer r; the via cost at a vertex is the layer span (max - min) of
/// the layers meeting at its column, including the net's pin layers there.
/// Strict mode excludes any choice that would overflow an edge and throws
/// InfeasibleError when no zero-overflow assignment exists; OverflowMin mode
/// admits overflow at a cost of 10^6 per unit, which minimizes
/// (overflow, via count) lexicographically. Demands in `demand` are
/// incremented by the chosen assignment.
AssignedTree sola_assign(const OrientedTree& t, const GridGraph& gk,
                         std::vector<int>& demand, AssignMode mode);

struct AssignedSolution {
  std::vector<AssignedTree> trees; // indexed by net id
  std::vector<int> demand;         // final k-layer demand map
};

struct AssignMetrics {
  long long total_overflow = 0;
  int max_overflow = 0;
  double wirelength = 0.0; // boundary plus via edge lengths, over all trees
  int via_count = 0;
  double t_run = 0.0; // processor seconds; 0 unless measured
};

/// Assigns every net of s in the given order against a fresh demand state.
/// `ordering` must be a permutation of the net ids.
std::pair<AssignedSolution, AssignMetrics> assign_ordered(
    const CompressedSolution& s, const std::vector<int>& ordering,
    const GridGraph& gk, AssignMode mode, bool measure_time = false);

/// Canonical source pin: the net's compressed pin position with the smallest
/// vertex id.
int canonical_root(const GridGraph& gk, int net);

} // namespace gridroute
