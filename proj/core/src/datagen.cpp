#include "gridroute/datagen.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gridroute/errors.hpp"
#include "gridroute/rng.hpp"

namespace gridroute {

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const char* what) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw DataError(std::string(what) + ": unknown field '" + key + "'");
  }
  for (const std::string& key : allowed) {
    if (!obj.contains(key))
      throw DataError(std::string(what) + ": missing field '" + key + "'");
  }
}

json tree_to_json(const RoutingTree& t, const GridGraph& g1) {
  json vertices = json::array();
  for (int v : t.vertices) {
    int x, y, layer;
    g1.vertex_at(v, x, y, layer);
    vertices.push_back(json::array({x, y}));
  }
  json edges = json::array();
  for (int e : t.edges) {
    auto [u, v] = g1.edge_endpoints(e);
    int ux, uy, ul, vx, vy, vl;
    g1.vertex_at(u, ux, uy, ul);
    g1.vertex_at(v, vx, vy, vl);
    edges.push_back(json::array({ux, uy, vx, vy}));
  }
  return json{{"net", t.net}, {"vertices", vertices}, {"edges", edges}};
}

RoutingTree tree_from_json(const json& j, const GridGraph& g1) {
  require_keys(j, {"net", "vertices", "edges"}, "tree");
  RoutingTree t;
  t.net = j.at("net").get<int>();
  for (const json& v : j.at("vertices"))
    t.vertices.push_back(g1.vertex_id(v.at(0).get<int>(), v.at(1).get<int>(), 1));
  for (const json& e : j.at("edges")) {
    const int u = g1.vertex_id(e.at(0).get<int>(), e.at(1).get<int>(), 1);
    const int v = g1.vertex_id(e.at(2).get<int>(), e.at(3).get<int>(), 1);
    const int id = g1.boundary_edge_between(u, v);
    if (id < 0) throw DataError("tree: edge endpoints are not grid neighbours");
    t.edges.push_back(id);
  }
  std::sort(t.vertices.begin(), t.vertices.end());
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

json group_to_json(const DataGroup& g, const GridGraph& g1) {
  json pins = json::array();
  for (const Pin& p : g.pins) pins.push_back(json::array({p.x, p.y, p.layer, p.net}));
  json trees = json::array();
  for (const RoutingTree& t : g.trees) trees.push_back(tree_to_json(t, g1));
  json table = json::array();
  for (const PermutationRecord& r : g.table) {
    table.push_back(json{{"total_overflow", r.total_overflow},
                         {"max_overflow", r.max_overflow},
                         {"wirelength", r.wirelength},
                         {"score", r.score},
                         {"rank", r.rank}});
  }
  return json{{"problem", json{{"pins", pins}}},
              {"trees", trees},
              {"features", g.features.values},
              {"ordering_table", table},
              {"optimal_index", g.optimal_index}};
}

DataGroup group_from_json(const json& j, const DatasetParams& p,
                          const GridGraph& g1) {
  require_keys(j, {"problem", "trees", "features", "ordering_table", "optimal_index"},
               "group");
  require_keys(j.at("problem"), {"pins"}, "problem");
  DataGroup g;
  for (const json& q : j.at("problem").at("pins")) {
    const Pin pin{q.at(0).get<int>(), q.at(1).get<int>(), q.at(2).get<int>(),
                  q.at(3).get<int>()};
    if (pin.x < 0 || pin.x >= p.width || pin.y < 0 || pin.y >= p.height ||
        pin.layer < 1 || pin.layer > p.layers || pin.net < 0 ||
        pin.net >= p.n_nets)
      throw DataError("group: pin outside the grid or net range");
    g.pins.push_back(pin);
  }
  for (const json& t : j.at("trees")) g.trees.push_back(tree_from_json(t, g1));
  g.features.mode = p.feature_mode;
  g.features.n_nets = p.n_nets;
  g.features.values = j.at("features").get<std::vector<double>>();
  const std::size_t expect_dim = static_cast<std::size_t>(
      p.feature_mode == FeatureMode::Full ? 4 * p.n_nets + 4 : 4 * p.n_nets);
  if (g.features.values.size() != expect_dim)
    throw DataError("group: feature vector dimension mismatch");
  for (const json& r : j.at("ordering_table")) {
    require_keys(r, {"total_overflow", "max_overflow", "wirelength", "score", "rank"},
                 "ordering_table entry");
    g.table.push_back({r.at("total_overflow").get<long long>(),
                       r.at("max_overflow").get<int>(),
                       r.at("wirelength").get<double>(),
                       r.at("score").get<double>(), r.at("rank").get<int>()});
  }
  g.optimal_index = j.at("optimal_index").get<int>();

  const long long expect = factorial(p.n_nets);
  if (static_cast<long long>(g.table.size()) != expect)
    throw DataError("group: ordering table must have n_nets! entries");
  std::vector<bool> seen(g.table.size(), false);
  for (const PermutationRecord& r : g.table) {
    if (r.rank < 1 || r.rank > expect || seen[static_cast<std::size_t>(r.rank - 1)])
      throw DataError("group: ranks must cover 1..n_nets! exactly once");
    seen[static_cast<std::size_t>(r.rank - 1)] = true;
  }
  if (g.optimal_index < 0 || g.optimal_index >= expect ||
      g.table[static_cast<std::size_t>(g.optimal_index)].rank != 1)
    throw DataError("group: optimal_index must point at the rank-1 row");
  return g;
}

} // namespace

GridGraph problem_grid(const DatasetParams& p) {
  return build_grid(p.width, p.height, p.layers, p.boundary_cap, p.via_cap);
}

std::vector<Pin> gen_problem(const DatasetParams& p, std::uint64_t group_seed) {
  if (p.pins_per_layer > p.width * p.height)
    throw GenerationError("gen_problem: more pins per layer than grid cells");
  if (p.n_nets > p.pins_per_layer)
    throw GenerationError("gen_problem: more nets than pins per layer");

  for (int attempt = 0; attempt < 1000; ++attempt) {
    SplitMix64 rng(derive_seed(group_seed, static_cast<std::uint64_t>(attempt)));
    std::vector<Pin> pins;
    for (int layer = 1; layer <= p.layers; ++layer) {
      for (int cell : rng.sample(p.width * p.height, p.pins_per_layer)) {
        const int net = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.n_nets)));
        pins.push_back({cell % p.width, cell / p.width, layer, net});
      }
    }
    std::sort(pins.begin(), pins.end(), [](const Pin& a, const Pin& b) {
      return std::tie(a.layer, a.y, a.x, a.net) < std::tie(b.layer, b.y, b.x, b.net);
    });

    // Every net needs >= 2 pins on >= 2 distinct compressed positions,
    // otherwise its 2D tree would be trivial.
    std::vector<int> count(static_cast<std::size_t>(p.n_nets), 0);
    std::vector<std::set<std::pair<int, int>>> positions(
        static_cast<std::size_t>(p.n_nets));
    for (const Pin& q : pins) {
      ++count[static_cast<std::size_t>(q.net)];
      positions[static_cast<std::size_t>(q.net)].insert({q.x, q.y});
    }
    bool ok = true;
    for (int m = 0; m < p.n_nets; ++m) {
      if (count[static_cast<std::size_t>(m)] < 2 ||
          positions[static_cast<std::size_t>(m)].size() < 2) {
        ok = false;
        break;
      }
    }
    if (ok) return pins;
  }
  throw GenerationError("gen_problem: retry budget exhausted");
}

DataGroup gen_group(const DatasetParams& p, std::uint64_t group_seed) {
  GridGraph gk = problem_grid(p);
  gk.pins = gen_problem(p, group_seed);
  const GridGraph g1 = compress(gk);

  DataGroup g;
  g.pins = gk.pins;
  CompressedSolution s = route_all(g1, g1.nets(), p.router);
  g.features = feature_vector(gk, g1, s, p.feature_mode);

  const std::vector<RankedOrdering> ranked = rank_orderings(s, gk, true);
  g.table.reserve(ranked.size());
  for (std::size_t h = 0; h < ranked.size(); ++h) {
    const OrderingMetrics& m = ranked[h].metrics;
    g.table.push_back({m.total_overflow, m.max_overflow, m.wirelength, m.score,
                       m.rank});
    if (m.rank == 1) g.optimal_index = static_cast<int>(h);
  }
  g.trees = std::move(s.trees);
  return g;
}

Dataset gen_dataset(const DatasetParams& p) {
  Dataset d;
  d.params = p;
  d.groups.reserve(static_cast<std::size_t>(p.groups));
  for (int i = 0; i < p.groups; ++i)
    d.groups.push_back(gen_group(p, derive_seed(p.seed, static_cast<std::uint64_t>(i))));
  return d;
}

std::vector<int> recount_demand(const std::vector<RoutingTree>& trees,
                                const GridGraph& g1) {
  std::vector<int> demand(static_cast<std::size_t>(g1.edge_count()), 0);
  for (const RoutingTree& t : trees)
    for (int e : t.edges) ++demand[static_cast<std::size_t>(e)];
  return demand;
}

std::string dataset_to_jsonl(const Dataset& d) {
  const GridGraph g1 =
      build_grid(d.params.width, d.params.height, 1, 0, 0);
  json header{{"format_version", 1},
              {"router", router_name(d.params.router)},
              {"k", d.params.layers},
              {"n_nets", d.params.n_nets},
              {"feature_mode", feature_mode_name(d.params.feature_mode)},
              {"grid", json{{"width", d.params.width}, {"height", d.params.height}}},
              {"pins_per_layer", d.params.pins_per_layer},
              {"capacities", json{{"boundary", d.params.boundary_cap},
                                  {"via", d.params.via_cap}}},
              {"seed", d.params.seed},
              {"N", d.params.groups}};
  std::string out = header.dump();
  out.push_back('\n');
  for (const DataGroup& g : d.groups) {
    out += group_to_json(g, g1).dump();
    out.push_back('\n');
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset: empty file");

  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("dataset header: ") + e.what());
  }
  require_keys(header,
               {"format_version", "router", "k", "n_nets", "feature_mode", "grid",
                "pins_per_layer", "capacities", "seed", "N"},
               "dataset header");
  if (header.at("format_version").get<int>() != 1)
    throw DataError("dataset: unsupported format version");
  require_keys(header.at("grid"), {"width", "height"}, "dataset grid");
  require_keys(header.at("capacities"), {"boundary", "via"}, "dataset capacities");

  Dataset d;
  d.params.router = router_from_name(header.at("router").get<std::string>());
  d.params.layers = header.at("k").get<int>();
  d.params.n_nets = header.at("n_nets").get<int>();
  d.params.feature_mode =
      feature_mode_from_name(header.at("feature_mode").get<std::string>());
  d.params.width = header.at("grid").at("width").get<int>();
  d.params.height = header.at("grid").at("height").get<int>();
  d.params.pins_per_layer = header.at("pins_per_layer").get<int>();
  d.params.boundary_cap = header.at("capacities").at("boundary").get<int>();
  d.params.via_cap = header.at("capacities").at("via").get<int>();
  d.params.seed = header.at("seed").get<std::uint64_t>();
  d.params.groups = header.at("N").get<int>();

  const GridGraph g1 = build_grid(d.params.width, d.params.height, 1, 0, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(std::string("dataset group: ") + e.what());
    }
    d.groups.push_back(group_from_json(j, d.params, g1));
  }
  if (static_cast<int>(d.groups.size()) != d.params.groups)
    throw DataError("dataset: group count does not match header N");
  return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_dataset: cannot open " + path);
  const std::string text = dataset_to_jsonl(d);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_dataset: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_jsonl(buf.str());
}

const char* router_name(RouterKind r) {
  return r == RouterKind::Kruskal ? "ka" : "st";
}

RouterKind router_from_name(const std::string& name) {
  if (name == "ka") return RouterKind::Kruskal;
  if (name == "st") return RouterKind::Steiner;
  throw DataError("unknown router '" + name + "' (expected ka or st)");
}

const char* feature_mode_name(FeatureMode m) {
  return m == FeatureMode::Full ? "full" : "reduced";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "full") return FeatureMode::Full;
  if (name == "reduced") return FeatureMode::Reduced;
  throw DataError("unknown feature mode '" + name + "' (expected full or reduced)");
}

} // namespace gridroute
