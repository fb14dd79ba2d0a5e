#include "gridroute/features.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "gridroute/layer_assign.hpp"

namespace gridroute {

MinRectangle min_rectangle(const CompressedSolution& s, const GridGraph& g1) {
  int xmin = std::numeric_limits<int>::max(), xmax = std::numeric_limits<int>::min();
  int ymin = xmin, ymax = xmax;
  bool any = false;
  for (const RoutingTree& t : s.trees) {
    for (int v : t.vertices) {
      int x, y, layer;
      g1.vertex_at(v, x, y, layer);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("min_rectangle: empty solution");
  MinRectangle r;
  r.dx = xmax - xmin;
  r.dy = ymax - ymin;
  r.area = r.dx * r.dy;
  return r;
}

int branch_count(const CompressedSolution& s, const GridGraph& g1) {
  int count = 0;
  for (const RoutingTree& t : s.trees) {
    if (t.edges.empty()) continue;
    const OrientedTree o = orient(t, canonical_root(g1, t.net), g1);
    for (const auto& ch : o.children)
      if (ch.size() > 1) ++count;
  }
  return count;
}

FeatureVector feature_vector(const GridGraph& gk, const GridGraph& g1,
                             const CompressedSolution& s, FeatureMode mode) {
  const int n = static_cast<int>(s.trees.size());
  FeatureVector f;
  f.mode = mode;
  f.n_nets = n;
  f.values.reserve(static_cast<std::size_t>(4 * n + 4));

  for (int m = 0; m < n; ++m) {
    const RoutingTree& t = s.trees[static_cast<std::size_t>(m)];
    int pins_k = 0;
    for (const Pin& p : gk.pins)
      if (p.net == m) ++pins_k;
    // Compressed pins keep their multiplicity when projected, so this count
    // is taken from the compressed pin list.
    int pins_1 = 0;
    for (const Pin& p : g1.pins)
      if (p.net == m) ++pins_1;

    long long overflow = 0;
    for (int e : t.edges)
      overflow += edge_overflow(s.demand_map[static_cast<std::size_t>(e)],
                                g1.edges[static_cast<std::size_t>(e)].capacity);

    f.values.push_back(static_cast<double>(pins_k));
    f.values.push_back(static_cast<double>(pins_1));
    f.values.push_back(static_cast<double>(t.vertices.size()));
    f.values.push_back(static_cast<double>(overflow));
  }

  if (mode == FeatureMode::Full) {
    const MinRectangle r = min_rectangle(s, g1);
    f.values.push_back(static_cast<double>(r.dx));
    f.values.push_back(static_cast<double>(r.dy));
    f.values.push_back(static_cast<double>(r.area));
    f.values.push_back(static_cast<double>(branch_count(s, g1)));
  }
  return f;
}

} // namespace gridroute
