#include "gridroute/layer_assign.hpp"

#include <algorithm>
#include <ctime>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "gridroute/errors.hpp"

namespace gridroute {

namespace {

constexpr long long kOverflowPenalty = 1000000; // dominates any via count
constexpr long long kInfeasible = std::numeric_limits<long long>::max() / 4;

long long add_cost(long long a, long long b) {
  if (a >= kInfeasible || b >= kInfeasible) return kInfeasible;
  return a + b;
}

} // namespace

OrientedTree orient(const RoutingTree& t, int root_vertex, const GridGraph& g) {
  OrientedTree o;
  o.net = t.net;
  o.vertex_ids = t.vertices;

  auto at = [&](int vertex) {
    auto it = std::lower_bound(o.vertex_ids.begin(), o.vertex_ids.end(), vertex);
    if (it == o.vertex_ids.end() || *it != vertex) return -1;
    return static_cast<int>(it - o.vertex_ids.begin());
  };
  o.root = at(root_vertex);
  if (o.root < 0)
    throw std::invalid_argument("orient: root vertex is not in the tree");

  const int n = static_cast<int>(o.vertex_ids.size());
  std::vector<std::vector<std::pair<int, int>>> adj(
      static_cast<std::size_t>(n)); // (neighbour index, edge id)
  for (int e : t.edges) {
    auto [u, v] = g.edge_endpoints(e);
    const int ui = at(u), vi = at(v);
    if (ui < 0 || vi < 0)
      throw std::invalid_argument("orient: edge endpoint missing from vertices");
    adj[static_cast<std::size_t>(ui)].emplace_back(vi, e);
    adj[static_cast<std::size_t>(vi)].emplace_back(ui, e);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  o.parent.assign(static_cast<std::size_t>(n), -1);
  o.parent_edge.assign(static_cast<std::size_t>(n), -1);
  o.children.resize(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[static_cast<std::size_t>(o.root)] = true;
  o.bfs_order.push_back(o.root);
  for (std::size_t head = 0; head < o.bfs_order.size(); ++head) {
    const int u = o.bfs_order[head];
    for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = true;
      o.parent[static_cast<std::size_t>(v)] = u;
      o.parent_edge[static_cast<std::size_t>(v)] = e;
      o.children[static_cast<std::size_t>(u)].push_back(v);
      o.bfs_order.push_back(v);
    }
  }
  if (static_cast<int>(o.bfs_order.size()) != n)
    throw std::invalid_argument("orient: tree is not connected");
  return o;
}

int canonical_root(const GridGraph& gk, int net) {
  int best = -1;
  for (const Pin& p : gk.pins) {
    if (p.net != net) continue;
    const int v = p.y * gk.width + p.x; // layer-1 vertex id
    if (best < 0 || v < best) best = v;
  }
  return best;
}

AssignedTree sola_assign(const OrientedTree& t, const GridGraph& gk,
                         std::vector<int>& demand, AssignMode mode) {
  const int k = gk.layers;
  const int n = static_cast<int>(t.vertex_ids.size());

  // Per-vertex column coordinates and the span of this net's pin layers there.
  std::vector<int> colx(static_cast<std::size_t>(n)), coly(static_cast<std::size_t>(n));
  std::vector<int> pin_lo(static_cast<std::size_t>(n), k + 1);
  std::vector<int> pin_hi(static_cast<std::size_t>(n), 0);
  std::map<std::pair<int, int>, int> column_of;
  for (int i = 0; i < n; ++i) {
    int x, y, layer;
    gk.vertex_at(t.vertex_ids[static_cast<std::size_t>(i)], x, y, layer);
    colx[static_cast<std::size_t>(i)] = x;
    coly[static_cast<std::size_t>(i)] = y;
    column_of[{x, y}] = i;
  }
  for (const Pin& p : gk.pins) {
    if (p.net != t.net) continue;
    auto it = column_of.find({p.x, p.y});
    if (it == column_of.end())
      throw std::invalid_argument("sola_assign: pin column not covered by tree");
    pin_lo[static_cast<std::size_t>(it->second)] =
        std::min(pin_lo[static_cast<std::size_t>(it->second)], p.layer);
    pin_hi[static_cast<std::size_t>(it->second)] =
        std::max(pin_hi[static_cast<std::size_t>(it->second)], p.layer);
  }

  // Marginal cost of routing one more connection through edge e.
  auto marginal = [&](int e) -> long long {
    if (demand[static_cast<std::size_t>(e)] <
        gk.edges[static_cast<std::size_t>(e)].capacity)
      return 0;
    return mode == AssignMode::Strict ? kInfeasible : kOverflowPenalty;
  };
  // k-layer boundary edge for a compressed tree edge placed on `layer`.
  auto lifted_edge = [&](int compressed_edge, int layer) {
    const EdgeInfo& i = gk.edge_info(compressed_edge); // layer-1 ids coincide
    return i.dir == 0 ? gk.horizontal_edge(i.x, i.y, layer)
                      : gk.vertical_edge(i.x, i.y, layer);
  };

  // mvc[i][r]: cost of vertex i's subtree when its parent edge sits on layer
  // r (1-based). win[i][r]: the span window [lo,hi] realizing it. The root
  // has no parent edge; its best window is searched at the end.
  std::vector<std::vector<long long>> mvc(
      static_cast<std::size_t>(n),
      std::vector<long long>(static_cast<std::size_t>(k + 1), kInfeasible));
  std::vector<std::vector<std::pair<int, int>>> win(
      static_cast<std::size_t>(n),
      std::vector<std::pair<int, int>>(static_cast<std::size_t>(k + 1), {0, 0}));
  std::pair<int, int> root_win{0, 0};
  long long root_cost = kInfeasible;

  for (auto it = t.bfs_order.rbegin(); it != t.bfs_order.rend(); ++it) {
    const int i = *it;
    const auto& kids = t.children[static_cast<std::size_t>(i)];
    const bool is_root = i == t.root;

    std::vector<long long> best(static_cast<std::size_t>(k + 1), kInfeasible);
    std::vector<std::pair<int, int>> best_win(static_cast<std::size_t>(k + 1),
                                              {0, 0});

    for (int lo = 1; lo <= k; ++lo) {
      std::vector<long long> child_min(kids.size(), kInfeasible);
      long long via_sum = 0;
      for (int hi = lo; hi <= k; ++hi) {
        if (hi > lo) {
          const int via = gk.via_edge(colx[static_cast<std::size_t>(i)],
                                      coly[static_cast<std::size_t>(i)], hi - 1);
          via_sum = add_cost(via_sum, marginal(via));
        }
        long long cost = add_cost(via_sum, hi - lo);
        for (std::size_t c = 0; c < kids.size(); ++c) {
          child_min[c] = std::min(
              child_min[c], mvc[static_cast<std::size_t>(kids[c])]
                               [static_cast<std::size_t>(hi)]);
          cost = add_cost(cost, child_min[c]);
        }
        // The window must reach every pin layer of this net at this column.
        if (pin_hi[static_cast<std::size_t>(i)] > 0 &&
            (lo > pin_lo[static_cast<std::size_t>(i)] ||
             hi < pin_hi[static_cast<std::size_t>(i)]))
          continue;
        if (is_root) {
          if (cost < root_cost) {
            root_cost = cost;
            root_win = {lo, hi};
          }
        } else {
          for (int r = lo; r <= hi; ++r) {
            if (cost < best[static_cast<std::size_t>(r)]) {
              best[static_cast<std::size_t>(r)] = cost;
              best_win[static_cast<std::size_t>(r)] = {lo, hi};
            }
          }
        }
      }
    }
    if (!is_root) {
      for (int r = 1; r <= k; ++r) {
        const long long edge_cost =
            marginal(lifted_edge(t.parent_edge[static_cast<std::size_t>(i)], r));
        mvc[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] =
            add_cost(best[static_cast<std::size_t>(r)], edge_cost);
        win[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] =
            best_win[static_cast<std::size_t>(r)];
      }
    }
  }

  if (root_cost >= kInfeasible)
    throw InfeasibleError(t.net, "sola_assign: no zero-overflow assignment for net " +
                                     std::to_string(t.net));

  // Traceback: pick each child's cheapest layer inside the parent's window
  // (lowest layer on ties), then commit the tight span per column.
  std::vector<int> edge_layer_of(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> chosen_win(static_cast<std::size_t>(n), {0, 0});
  chosen_win[static_cast<std::size_t>(t.root)] = root_win;
  for (int i : t.bfs_order) {
    const auto [lo, hi] = chosen_win[static_cast<std::size_t>(i)];
    for (int c : t.children[static_cast<std::size_t>(i)]) {
      int best_r = lo;
      for (int r = lo; r <= hi; ++r) {
        if (mvc[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] <
            mvc[static_cast<std::size_t>(c)][static_cast<std::size_t>(best_r)])
          best_r = r;
      }
      edge_layer_of[static_cast<std::size_t>(c)] = best_r;
      chosen_win[static_cast<std::size_t>(c)] =
          win[static_cast<std::size_t>(c)][static_cast<std::size_t>(best_r)];
    }
  }

  AssignedTree out;
  out.net = t.net;
  for (int i = 0; i < n; ++i) {
    if (i == t.root) continue;
    out.edge_layer.emplace_back(t.parent_edge[static_cast<std::size_t>(i)],
                                edge_layer_of[static_cast<std::size_t>(i)]);
  }
  std::sort(out.edge_layer.begin(), out.edge_layer.end());
  for (auto [e, r] : out.edge_layer) out.boundary_edges.push_back(lifted_edge(e, r));
  std::sort(out.boundary_edges.begin(), out.boundary_edges.end());

  for (int i = 0; i < n; ++i) {
    int lo = k + 1, hi = 0;
    auto touch = [&](int r) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    };
    if (i != t.root) touch(edge_layer_of[static_cast<std::size_t>(i)]);
    for (int c : t.children[static_cast<std::size_t>(i)])
      touch(edge_layer_of[static_cast<std::size_t>(c)]);
    if (pin_hi[static_cast<std::size_t>(i)] > 0) {
      touch(pin_lo[static_cast<std::size_t>(i)]);
      touch(pin_hi[static_cast<std::size_t>(i)]);
    }
    for (int r = lo; r < hi; ++r)
      out.via_edges.push_back(gk.via_edge(colx[static_cast<std::size_t>(i)],
                                          coly[static_cast<std::size_t>(i)], r));
  }
  std::sort(out.via_edges.begin(), out.via_edges.end());

  for (int e : out.boundary_edges) ++demand[static_cast<std::size_t>(e)];
  for (int e : out.via_edges) ++demand[static_cast<std::size_t>(e)];
  return out;
}

std::pair<AssignedSolution, AssignMetrics> assign_ordered(
    const CompressedSolution& s, const std::vector<int>& ordering,
    const GridGraph& gk, AssignMode mode, bool measure_time) {
  const int n = static_cast<int>(s.trees.size());
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  if (static_cast<int>(ordering.size()) != n)
    throw std::invalid_argument("assign_ordered: ordering size mismatch");
  for (int m : ordering) {
    if (m < 0 || m >= n || used[static_cast<std::size_t>(m)])
      throw std::invalid_argument("assign_ordered: ordering is not a permutation");
    used[static_cast<std::size_t>(m)] = true;
  }

  AssignedSolution out;
  out.demand.assign(static_cast<std::size_t>(gk.edge_count()), 0);
  out.trees.resize(static_cast<std::size_t>(n));
  AssignMetrics metrics;

  const std::clock_t start = measure_time ? std::clock() : 0;
  for (int m : ordering) {
    const RoutingTree& tree = s.trees[static_cast<std::size_t>(m)];
    OrientedTree o = orient(tree, canonical_root(gk, m), gk);
    out.trees[static_cast<std::size_t>(m)] =
        sola_assign(o, gk, out.demand, mode);
  }
  if (measure_time)
    metrics.t_run =
        static_cast<double>(std::clock() - start) / CLOCKS_PER_SEC;

  const OverflowSummary o = solution_overflow(out.demand, gk);
  metrics.total_overflow = o.total;
  metrics.max_overflow = o.max;
  for (const AssignedTree& t : out.trees) {
    for (int e : t.boundary_edges)
      metrics.wirelength += gk.edges[static_cast<std::size_t>(e)].length;
    for (int e : t.via_edges)
      metrics.wirelength += gk.edges[static_cast<std::size_t>(e)].length;
    metrics.via_count += static_cast<int>(t.via_edges.size());
  }
  return {std::move(out), metrics};
}

} // namespace gridroute
