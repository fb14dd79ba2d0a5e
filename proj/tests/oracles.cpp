#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace gridroute::testing {

namespace {

// Iterative union-find over arbitrary int keys.
class Components {
public:
  int find(int a) {
    auto it = parent_.find(a);
    if (it == parent_.end()) {
      parent_[a] = a;
      return a;
    }
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
  std::map<int, int> parent_;
};

} // namespace

double steiner_opt_bruteforce(const GridGraph& g1,
                              const std::vector<int>& terminals) {
  const int ne = g1.edge_count();
  if (ne > 20) throw std::invalid_argument("steiner oracle: grid too large");
  if (terminals.empty()) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << ne); ++mask) {
    double length = 0.0;
    Components comp;
    for (int e = 0; e < ne; ++e) {
      if (!(mask & (1u << e))) continue;
      auto [u, v] = g1.edge_endpoints(e);
      comp.unite(u, v);
      length += g1.edges[static_cast<std::size_t>(e)].length;
    }
    if (length >= best) continue;
    bool connected = true;
    for (std::size_t i = 1; i < terminals.size(); ++i) {
      if (comp.find(terminals[i]) != comp.find(terminals[0])) {
        connected = false;
        break;
      }
    }
    if (connected) best = length;
  }
  return best;
}

AssignmentCost enumerate_best_assignment(const RoutingTree& t, const GridGraph& gk,
                                         const std::vector<int>& base_demand) {
  const int k = gk.layers;
  const int ne = static_cast<int>(t.edges.size());

  // Incident tree edges and pin layers per tree vertex.
  std::vector<std::vector<int>> incident(t.vertices.size());
  for (int i = 0; i < ne; ++i) {
    auto [u, v] = gk.edge_endpoints(t.edges[static_cast<std::size_t>(i)]);
    for (std::size_t j = 0; j < t.vertices.size(); ++j) {
      if (t.vertices[j] == u || t.vertices[j] == v) incident[j].push_back(i);
    }
  }
  std::vector<int> pin_lo(t.vertices.size(), k + 1), pin_hi(t.vertices.size(), 0);
  for (const Pin& p : gk.pins) {
    if (p.net != t.net) continue;
    const int v1 = p.y * gk.width + p.x;
    for (std::size_t j = 0; j < t.vertices.size(); ++j) {
      if (t.vertices[j] != v1) continue;
      pin_lo[j] = std::min(pin_lo[j], p.layer);
      pin_hi[j] = std::max(pin_hi[j], p.layer);
    }
  }

  auto marginal = [&](int e) -> long long {
    return base_demand[static_cast<std::size_t>(e)] >=
                   gk.edges[static_cast<std::size_t>(e)].capacity
               ? 1
               : 0;
  };

  AssignmentCost best{std::numeric_limits<long long>::max(),
                      std::numeric_limits<int>::max()};
  std::vector<int> layer(static_cast<std::size_t>(std::max(ne, 1)), 1);
  long long combos = 1;
  for (int i = 0; i < ne; ++i) combos *= k;

  for (long long code = 0; code < combos; ++code) {
    long long rem = code;
    for (int i = 0; i < ne; ++i) {
      layer[static_cast<std::size_t>(i)] = 1 + static_cast<int>(rem % k);
      rem /= k;
    }
    AssignmentCost cost{0, 0};
    for (int i = 0; i < ne; ++i) {
      const EdgeInfo& info = gk.edge_info(t.edges[static_cast<std::size_t>(i)]);
      const int lifted =
          info.dir == 0
              ? gk.horizontal_edge(info.x, info.y, layer[static_cast<std::size_t>(i)])
              : gk.vertical_edge(info.x, info.y, layer[static_cast<std::size_t>(i)]);
      cost.overflow_added += marginal(lifted);
    }
    for (std::size_t j = 0; j < t.vertices.size(); ++j) {
      int lo = k + 1, hi = 0;
      for (int i : incident[j]) {
        lo = std::min(lo, layer[static_cast<std::size_t>(i)]);
        hi = std::max(hi, layer[static_cast<std::size_t>(i)]);
      }
      if (pin_hi[j] > 0) {
        lo = std::min(lo, pin_lo[j]);
        hi = std::max(hi, pin_hi[j]);
      }
      if (hi == 0) continue; // isolated vertex without pins
      int x, y, l;
      gk.vertex_at(t.vertices[j], x, y, l);
      for (int r = lo; r < hi; ++r) {
        ++cost.via_count;
        cost.overflow_added += marginal(gk.via_edge(x, y, r));
      }
    }
    best = std::min(best, cost);
  }
  return best;
}

AssignmentCost realized_cost(const AssignedTree& a, const GridGraph& gk,
                             const std::vector<int>& base_demand) {
  AssignmentCost cost{0, static_cast<int>(a.via_edges.size())};
  auto marginal = [&](int e) -> long long {
    return base_demand[static_cast<std::size_t>(e)] >=
                   gk.edges[static_cast<std::size_t>(e)].capacity
               ? 1
               : 0;
  };
  for (int e : a.boundary_edges) cost.overflow_added += marginal(e);
  for (int e : a.via_edges) cost.overflow_added += marginal(e);
  return cost;
}

bool assigned_tree_connected(const AssignedTree& a, const GridGraph& gk) {
  Components comp;
  std::set<int> vertices;
  for (int e : a.boundary_edges) {
    auto [u, v] = gk.edge_endpoints(e);
    comp.unite(u, v);
    vertices.insert(u);
    vertices.insert(v);
  }
  for (int e : a.via_edges) {
    auto [u, v] = gk.edge_endpoints(e);
    comp.unite(u, v);
    vertices.insert(u);
    vertices.insert(v);
  }

  std::vector<int> pin_vertices;
  for (const Pin& p : gk.pins) {
    if (p.net != a.net) continue;
    pin_vertices.push_back(gk.vertex_id(p.x, p.y, p.layer));
  }
  if (pin_vertices.empty()) return false;
  for (int v : pin_vertices) vertices.insert(v);

  const int root = comp.find(*vertices.begin());
  for (int v : vertices) {
    if (comp.find(v) != root) return false;
  }
  return true;
}

} // namespace gridroute::testing
