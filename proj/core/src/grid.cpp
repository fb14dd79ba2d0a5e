#include "gridroute/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridroute {

void GridGraph::rebuild_index() {
  const int cells = width * height * layers;
  h_id_.assign(static_cast<std::size_t>(cells), -1);
  v_id_.assign(static_cast<std::size_t>(cells), -1);
  via_id_.assign(static_cast<std::size_t>(cells), -1);
  info_.clear();
  info_.reserve(static_cast<std::size_t>(edge_count()));

  int next = 0;
  for (int layer = 1; layer <= layers; ++layer) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (x < width - 1) {
          h_id_[static_cast<std::size_t>(cell(x, y, layer))] = next++;
          info_.push_back({EdgeKind::Boundary, x, y, layer, 0});
        }
        if (y < height - 1) {
          v_id_[static_cast<std::size_t>(cell(x, y, layer))] = next++;
          info_.push_back({EdgeKind::Boundary, x, y, layer, 1});
        }
      }
    }
  }
  for (int layer = 1; layer < layers; ++layer) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        via_id_[static_cast<std::size_t>(cell(x, y, layer))] = next++;
        info_.push_back({EdgeKind::Via, x, y, layer, 0});
      }
    }
  }
}

std::pair<int, int> GridGraph::edge_endpoints(int e) const {
  const EdgeInfo& i = info_[static_cast<std::size_t>(e)];
  const int u = vertex_id(i.x, i.y, i.layer);
  if (i.kind == EdgeKind::Via) return {u, vertex_id(i.x, i.y, i.layer + 1)};
  if (i.dir == 0) return {u, vertex_id(i.x + 1, i.y, i.layer)};
  return {u, vertex_id(i.x, i.y + 1, i.layer)};
}

int GridGraph::boundary_edge_between(int u, int v) const {
  if (u > v) std::swap(u, v);
  int ux, uy, ul, vx, vy, vl;
  vertex_at(u, ux, uy, ul);
  vertex_at(v, vx, vy, vl);
  if (ul != vl) return -1;
  if (vy == uy && vx == ux + 1) return horizontal_edge(ux, uy, ul);
  if (vx == ux && vy == uy + 1) return vertical_edge(ux, uy, ul);
  return -1;
}

std::vector<Net> GridGraph::nets() const {
  std::vector<Net> out(static_cast<std::size_t>(net_count()));
  for (std::size_t m = 0; m < out.size(); ++m) out[m].id = static_cast<int>(m);
  for (const Pin& p : pins) out[static_cast<std::size_t>(p.net)].pins.push_back(p);
  return out;
}

int GridGraph::net_count() const {
  int maxid = -1;
  for (const Pin& p : pins) maxid = std::max(maxid, p.net);
  return maxid + 1;
}

GridGraph build_grid(int width, int height, int layers, int boundary_cap,
                     int via_cap) {
  if (width < 1 || height < 1 || layers < 1)
    throw std::invalid_argument("build_grid: dimensions must be positive");
  if (boundary_cap < 0 || via_cap < 0)
    throw std::invalid_argument("build_grid: capacities must be nonnegative");

  GridGraph g;
  g.width = width;
  g.height = height;
  g.layers = layers;
  g.rebuild_index();
  g.edges.resize(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    EdgeState& s = g.edges[static_cast<std::size_t>(e)];
    s.capacity = g.edge_info(e).kind == EdgeKind::Boundary ? boundary_cap : via_cap;
    s.length = 1.0;
    s.demand = 0;
  }
  return g;
}

GridGraph compress(const GridGraph& g) {
  GridGraph c = build_grid(g.width, g.height, 1, 0, 0);
  for (int e = 0; e < c.edge_count(); ++e) {
    const EdgeInfo& i = c.edge_info(e);
    int cap = 0;
    for (int layer = 1; layer <= g.layers; ++layer) {
      const int src = i.dir == 0 ? g.horizontal_edge(i.x, i.y, layer)
                                 : g.vertical_edge(i.x, i.y, layer);
      cap += g.edges[static_cast<std::size_t>(src)].capacity;
    }
    EdgeState& s = c.edges[static_cast<std::size_t>(e)];
    s.capacity = cap;
    s.length = g.edges[static_cast<std::size_t>(
                           i.dir == 0 ? g.horizontal_edge(i.x, i.y, 1)
                                      : g.vertical_edge(i.x, i.y, 1))]
                   .length;
  }
  c.pins.reserve(g.pins.size());
  for (const Pin& p : g.pins) c.pins.push_back({p.x, p.y, 1, p.net});
  return c;
}

int edge_overflow(int demand, int capacity) {
  return demand > capacity ? demand - capacity : 0;
}

OverflowSummary solution_overflow(const std::vector<int>& demand,
                                  const GridGraph& g) {
  OverflowSummary s;
  for (int e = 0; e < g.edge_count(); ++e) {
    const int o = edge_overflow(demand[static_cast<std::size_t>(e)],
                                g.edges[static_cast<std::size_t>(e)].capacity);
    s.total += o;
    s.max = std::max(s.max, o);
  }
  return s;
}

} // namespace gridroute
