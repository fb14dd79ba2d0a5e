#pragma once

#include <vector>

#include "gridroute/grid.hpp"
#include "gridroute/route2d.hpp"

namespace gridroute {

enum class FeatureMode { Full, Reduced };

// Flattened feature vector of a routing problem and its 2D solution: one
// 4-component block per net, ascending net id, plus a 4-component global
// block in Full mode. Dimension: 4*n_nets + 4 (Full) or 4*n_nets (Reduced).
struct FeatureVector {
  FeatureMode mode = FeatureMode::Full;
  int n_nets = 0;
  std::vector<double> values;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct MinRectangle {
  int dx = 0;
  int dy = 0;
  int area = 0;
};

/// Coordinate ranges of the smallest rectangle containing every vertex used
/// by the solution. Throws std::invalid_argument on an empty solution.
MinRectangle min_rectangle(const CompressedSolution& s, const GridGraph& g1);

/// Number of branch vertices over all trees: vertices with more than one
/// child once each tree is oriented away from its canonical root.
int branch_count(const CompressedSolution& s, const GridGraph& g1);

/// Per-net blocks are (pins in the k-layer problem, pins after compression,
/// tree vertices, total tree-edge overflow); the global block is
/// (dx, dy, area, branch count).
FeatureVector feature_vector(const GridGraph& gk, const GridGraph& g1,
                             const CompressedSolution& s, FeatureMode mode);

} // namespace gridroute
