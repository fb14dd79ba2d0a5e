#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gridroute {

/// A terminal of a net, located at a grid vertex. Layers are 1-based.
struct Pin {
  int x = 0;
  int y = 0;
  int layer = 1;
  int net = 0;

  friend bool operator==(const Pin&, const Pin&) = default;
};

/// A set of pins that must be electrically connected by one tree.
struct Net {
  int id = 0;
  std::vector<Pin> pins;
};

struct EdgeState {
  int capacity = 0;
  double length = 1.0;
  int demand = 0;

  friend bool operator==(const EdgeState&, const EdgeState&) = default;
};

enum class EdgeKind { Boundary, Via };

struct EdgeInfo {
  EdgeKind kind = EdgeKind::Boundary;
  int x = 0;
  int y = 0;
  int layer = 1;
  int dir = 0; // boundary: 0 = +x, 1 = +y; via: unused (connects layer, layer+1)
};

// k-layer grid graph. Vertices are (x, y, layer) cells; boundary edges join
// orthogonal same-layer neighbours; via edges join vertically adjacent cells.
//
// Identity is canonical: vertices are ordered by (layer, y, x) and edges by
// (kind, lower endpoint, direction with +x before +y). Edge ids follow that
// order, so iterating edges by id is the canonical iteration and every
// downstream tie-break is deterministic. The layer-1 vertex and boundary-edge
// ids of a k-layer grid coincide with the ids of its 1-layer compression.
class GridGraph {
public:
  int width = 0;
  int height = 0;
  int layers = 1;
  std::vector<EdgeState> edges; // indexed by canonical edge id
  std::vector<Pin> pins;

  int vertex_count() const { return width * height * layers; }
  int boundary_edge_count() const {
    return layers * (height * (width - 1) + width * (height - 1));
  }
  int via_edge_count() const { return (layers - 1) * width * height; }
  int edge_count() const { return boundary_edge_count() + via_edge_count(); }

  int vertex_id(int x, int y, int layer) const {
    return ((layer - 1) * height + y) * width + x;
  }
  /// Inverse of vertex_id: (x, y, layer).
  void vertex_at(int id, int& x, int& y, int& layer) const {
    x = id % width;
    y = (id / width) % height;
    layer = id / (width * height) + 1;
  }

  /// Edge id of (x,y,layer)-(x+1,y,layer). Requires x < width-1.
  int horizontal_edge(int x, int y, int layer) const {
    return h_id_[cell(x, y, layer)];
  }
  /// Edge id of (x,y,layer)-(x,y+1,layer). Requires y < height-1.
  int vertical_edge(int x, int y, int layer) const {
    return v_id_[cell(x, y, layer)];
  }
  /// Edge id of (x,y,layer)-(x,y,layer+1). Requires layer < layers.
  int via_edge(int x, int y, int layer) const {
    return via_id_[cell(x, y, layer)];
  }
  /// Boundary edge between two adjacent same-layer vertices, -1 if none.
  int boundary_edge_between(int u, int v) const;

  const EdgeInfo& edge_info(int e) const { return info_[static_cast<std::size_t>(e)]; }
  /// Endpoint vertex ids, lower id first.
  std::pair<int, int> edge_endpoints(int e) const;

  /// Pins grouped by net id; nets indexed 0..net_count()-1.
  std::vector<Net> nets() const;
  int net_count() const;

  void rebuild_index();

private:
  int cell(int x, int y, int layer) const {
    return ((layer - 1) * height + y) * width + x;
  }

  std::vector<int> h_id_, v_id_, via_id_; // -1 where the edge does not exist
  std::vector<EdgeInfo> info_;
};

/// Uniform k-layer grid with all demands 0 and all edge lengths 1.
/// Throws std::invalid_argument for non-positive dimensions or negative caps.
GridGraph build_grid(int width, int height, int layers, int boundary_cap,
                     int via_cap);

/// 1-layer compression: boundary capacities are summed over the k pre-image
/// layers, via edges vanish, pins are projected to layer 1 (multiplicity
/// preserved in the pin list).
GridGraph compress(const GridGraph& g);

/// max(0, demand - capacity).
int edge_overflow(int demand, int capacity);

struct OverflowSummary {
  long long total = 0;
  int max = 0;
};

/// Total and maximum overflow over all edges of g for the given demand map.
OverflowSummary solution_overflow(const std::vector<int>& demand,
                                  const GridGraph& g);

} // namespace gridroute
