#include "gridroute/route2d.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace gridroute {

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
  std::vector<int> parent;
};

int manhattan(const GridGraph& g, int u, int v) {
  int ux, uy, ul, vx, vy, vl;
  g.vertex_at(u, ux, uy, ul);
  g.vertex_at(v, vx, vy, vl);
  return std::abs(ux - vx) + std::abs(uy - vy);
}

// MST of the metric closure over terminal vertices. Returns closure edges
// (u, v) with u < v, in the order Kruskal accepted them.
std::vector<std::pair<int, int>> closure_mst(const GridGraph& g,
                                             const std::vector<int>& terminals) {
  struct ClosureEdge {
    int w, u, v;
  };
  std::vector<ClosureEdge> cand;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      int u = std::min(terminals[i], terminals[j]);
      int v = std::max(terminals[i], terminals[j]);
      cand.push_back({manhattan(g, u, v), u, v});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const ClosureEdge& a, const ClosureEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });

  std::map<int, int> dense; // vertex id -> dense index
  for (int t : terminals) dense.emplace(t, static_cast<int>(dense.size()));
  UnionFind uf(static_cast<int>(dense.size()));
  std::vector<std::pair<int, int>> mst;
  for (const ClosureEdge& e : cand) {
    if (uf.unite(dense[e.u], dense[e.v])) mst.emplace_back(e.u, e.v);
  }
  return mst;
}

// Spanning tree of an edge set: scan edges in ascending id order and keep the
// ones joining new components. Vertices are the endpoints of `edge_ids`.
RoutingTree spanning_tree_of(const GridGraph& g, int net,
                             const std::vector<int>& edge_ids) {
  std::map<int, int> dense;
  for (int e : edge_ids) {
    auto [u, v] = g.edge_endpoints(e);
    dense.emplace(u, 0);
    dense.emplace(v, 0);
  }
  int n = 0;
  for (auto& [vtx, idx] : dense) idx = n++;

  UnionFind uf(n);
  RoutingTree t;
  t.net = net;
  for (int e : edge_ids) {
    auto [u, v] = g.edge_endpoints(e);
    if (uf.unite(dense[u], dense[v])) t.edges.push_back(e);
  }
  for (const auto& [vtx, idx] : dense) t.vertices.push_back(vtx);
  return t;
}

std::vector<int> dedup_sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

RoutingTree embed_closure_mst(const GridGraph& g, int net,
                              const std::vector<int>& terminals) {
  std::vector<int> union_edges;
  for (auto [u, v] : closure_mst(g, terminals)) {
    std::vector<int> path = shortest_path(g, u, v);
    union_edges.insert(union_edges.end(), path.begin(), path.end());
  }
  return spanning_tree_of(g, net, dedup_sorted(std::move(union_edges)));
}

void prune_nonterminal_leaves(const GridGraph& g, RoutingTree& t,
                              const std::vector<int>& terminals) {
  std::set<int> term(terminals.begin(), terminals.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<int, int> degree;
    for (int e : t.edges) {
      auto [u, v] = g.edge_endpoints(e);
      ++degree[u];
      ++degree[v];
    }
    std::vector<int> keep;
    std::set<int> drop_vertex;
    for (int e : t.edges) {
      auto [u, v] = g.edge_endpoints(e);
      const bool u_leaf = degree[u] == 1 && !term.count(u);
      const bool v_leaf = degree[v] == 1 && !term.count(v);
      if (u_leaf || v_leaf) {
        changed = true;
        if (u_leaf) drop_vertex.insert(u);
        if (v_leaf) drop_vertex.insert(v);
      } else {
        keep.push_back(e);
      }
    }
    t.edges = std::move(keep);
    std::erase_if(t.vertices, [&](int v) { return drop_vertex.count(v) > 0; });
  }
}

} // namespace

double RoutingTree::wirelength(const GridGraph& g1) const {
  double total = 0.0;
  for (int e : edges) total += g1.edges[static_cast<std::size_t>(e)].length;
  return total;
}

std::vector<int> shortest_path(const GridGraph& g1, int u, int v) {
  int ux, uy, ul, vx, vy, vl;
  g1.vertex_at(u, ux, uy, ul);
  g1.vertex_at(v, vx, vy, vl);
  std::vector<int> path;
  int x = ux, y = uy;
  while (x != vx) {
    const int step = vx > x ? 1 : -1;
    path.push_back(g1.horizontal_edge(std::min(x, x + step), y, ul));
    x += step;
  }
  while (y != vy) {
    const int step = vy > y ? 1 : -1;
    path.push_back(g1.vertical_edge(x, std::min(y, y + step), ul));
    y += step;
  }
  return path;
}

RoutingTree route_net_kruskal(const GridGraph& g1, int net,
                              const std::vector<int>& pin_vertices) {
  if (pin_vertices.empty())
    throw std::invalid_argument("route_net_kruskal: no pin positions");
  if (pin_vertices.size() == 1) {
    RoutingTree t;
    t.net = net;
    t.vertices = pin_vertices;
    return t;
  }
  return embed_closure_mst(g1, net, pin_vertices);
}

RoutingTree route_net_steiner(const GridGraph& g1, int net,
                              const std::vector<int>& pin_vertices) {
  if (pin_vertices.empty())
    throw std::invalid_argument("route_net_steiner: no pin positions");
  if (pin_vertices.size() == 1) {
    RoutingTree t;
    t.net = net;
    t.vertices = pin_vertices;
    return t;
  }
  RoutingTree t = embed_closure_mst(g1, net, pin_vertices);
  prune_nonterminal_leaves(g1, t, pin_vertices);
  return t;
}

CompressedSolution route_all(const GridGraph& g1, const std::vector<Net>& nets,
                             RouterKind router) {
  if (nets.empty()) throw std::invalid_argument("route_all: no nets");
  CompressedSolution s;
  s.demand_map.assign(static_cast<std::size_t>(g1.edge_count()), 0);
  s.trees.resize(nets.size());
  for (const Net& n : nets) {
    std::vector<int> positions;
    positions.reserve(n.pins.size());
    for (const Pin& p : n.pins) positions.push_back(g1.vertex_id(p.x, p.y, 1));
    positions = dedup_sorted(std::move(positions));
    RoutingTree t = router == RouterKind::Kruskal
                        ? route_net_kruskal(g1, n.id, positions)
                        : route_net_steiner(g1, n.id, positions);
    for (int e : t.edges) ++s.demand_map[static_cast<std::size_t>(e)];
    s.trees[static_cast<std::size_t>(n.id)] = std::move(t);
  }
  return s;
}

} // namespace gridroute
