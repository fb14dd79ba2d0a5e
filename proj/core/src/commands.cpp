#include "gridroute/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "gridroute/errors.hpp"
#include "gridroute/features.hpp"
#include "gridroute/mlp.hpp"
#include "gridroute/ordering.hpp"
#include "gridroute/rng.hpp"
#include "gridroute/train.hpp"
#include "gridroute/version.hpp"

namespace gridroute {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class WallClock {
public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

void write_manifest(const std::string& artifact, const std::string& command,
                    const json& params, const json& seeds,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_s,
                    const json& extra = json::object()) {
  json m{{"command", command}, {"version", kVersion},    {"params", params},
         {"seeds", seeds},     {"inputs", inputs},       {"outputs", outputs},
         {"wall_time_s", wall_s}};
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_text(artifact + ".manifest.json", m.dump(2) + "\n");
}

int resolved_via_cap(int via_cap, int width, int height) {
  return via_cap < 0 ? width * height : via_cap;
}

DatasetParams params_from_gen(const GenOptions& o) {
  DatasetParams p;
  p.router = o.router;
  p.layers = o.layers;
  p.n_nets = o.nets;
  p.feature_mode = o.features;
  p.groups = o.groups;
  p.width = o.width;
  p.height = o.height;
  p.pins_per_layer = o.pins_per_layer;
  p.boundary_cap = o.boundary_cap;
  p.via_cap = resolved_via_cap(o.via_cap, o.width, o.height);
  p.seed = o.seed;
  return p;
}

void validate_gen(const GenOptions& o) {
  if (o.layers < 1 || o.nets < 1 || o.groups < 1 || o.width < 1 || o.height < 1)
    throw std::invalid_argument("gen: dimensions, nets and groups must be positive");
  if (o.pins_per_layer > o.width * o.height)
    throw std::invalid_argument("gen: pins per layer exceed grid cells");
  if (o.nets > o.pins_per_layer)
    throw std::invalid_argument("gen: more nets than pins per layer");
  if (o.nets > 8) throw std::invalid_argument("gen: ordering oracle caps nets at 8");
}

json gen_params_json(const GenOptions& o, const DatasetParams& p) {
  return json{{"router", router_name(p.router)},
              {"layers", p.layers},
              {"nets", p.n_nets},
              {"features", feature_mode_name(p.feature_mode)},
              {"groups", p.groups},
              {"width", p.width},
              {"height", p.height},
              {"pins_per_layer", p.pins_per_layer},
              {"boundary_cap", p.boundary_cap},
              {"via_cap", p.via_cap},
              {"out", o.out}};
}

int generate_one(GenOptions o) {
  validate_gen(o);
  if (o.out.empty()) o.out = default_dataset_name(o);
  WallClock clock;
  const DatasetParams p = params_from_gen(o);
  save_dataset(gen_dataset(p), o.out);
  write_manifest(o.out, "gen", gen_params_json(o, p), json{{"seed", p.seed}}, {},
                 {o.out}, clock.seconds());
  std::printf("wrote %s (%d groups)\n", o.out.c_str(), p.groups);
  return kExitOk;
}

// Paper experiment matrix: router x layers x nets x features, 16 datasets.
struct MatrixRow {
  RouterKind router;
  int layers;
  int nets;
  FeatureMode mode;
};

const MatrixRow kMatrix[16] = {
    {RouterKind::Kruskal, 2, 3, FeatureMode::Full},
    {RouterKind::Kruskal, 2, 3, FeatureMode::Reduced},
    {RouterKind::Steiner, 2, 3, FeatureMode::Full},
    {RouterKind::Steiner, 2, 3, FeatureMode::Reduced},
    {RouterKind::Kruskal, 5, 3, FeatureMode::Full},
    {RouterKind::Kruskal, 5, 3, FeatureMode::Reduced},
    {RouterKind::Steiner, 5, 3, FeatureMode::Full},
    {RouterKind::Steiner, 5, 3, FeatureMode::Reduced},
    {RouterKind::Kruskal, 2, 5, FeatureMode::Full},
    {RouterKind::Kruskal, 2, 5, FeatureMode::Reduced},
    {RouterKind::Steiner, 2, 5, FeatureMode::Full},
    {RouterKind::Steiner, 2, 5, FeatureMode::Reduced},
    {RouterKind::Kruskal, 5, 5, FeatureMode::Full},
    {RouterKind::Kruskal, 5, 5, FeatureMode::Reduced},
    {RouterKind::Steiner, 5, 5, FeatureMode::Full},
    {RouterKind::Steiner, 5, 5, FeatureMode::Reduced},
};

std::string checkpoint_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

struct CompareRow {
  std::string method;
  int matches = 0;
  int n = 0;
  double accuracy_pct() const {
    return n == 0 ? 0.0 : 100.0 * matches / static_cast<double>(n);
  }
  double ci95_pct() const {
    if (n == 0) return 0.0;
    const double p = matches / static_cast<double>(n);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) * 100.0;
  }
};

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string csv = "method,accuracy_pct,ci95_pct,n_groups,matches\n";
  for (const CompareRow& r : rows) {
    csv += r.method + "," + fmt("%.4f", r.accuracy_pct()) + "," +
           fmt("%.4f", r.ci95_pct()) + "," + std::to_string(r.n) + "," +
           std::to_string(r.matches) + "\n";
  }
  return csv;
}

json transfer_params_json(const TransferOptions& o) {
  return json{{"checkpoint", o.checkpoint},
              {"router", router_name(o.router)},
              {"min_layers", o.min_layers},
              {"max_layers", o.max_layers},
              {"groups", o.groups},
              {"width", o.width},
              {"height", o.height},
              {"pins_per_layer", o.pins_per_layer},
              {"boundary_cap", o.boundary_cap},
              {"via_cap", resolved_via_cap(o.via_cap, o.width, o.height)},
              {"out", o.out_csv}};
}

} // namespace

std::string default_dataset_name(const GenOptions& o) {
  std::ostringstream name;
  name << "data_" << router_name(o.router) << "_k" << o.layers << "_n" << o.nets
       << "_" << feature_mode_name(o.features) << "_g" << o.groups << "_s"
       << o.seed << ".jsonl";
  return name.str();
}

int cmd_gen(const GenOptions& opt) {
  if (!opt.paper_matrix) return generate_one(opt);

  validate_gen(opt);
  fs::create_directories(opt.out_dir);
  for (int i = 0; i < 16; ++i) {
    const MatrixRow& row = kMatrix[static_cast<std::size_t>(i)];
    GenOptions one = opt;
    one.paper_matrix = false;
    one.router = row.router;
    one.layers = row.layers;
    one.nets = row.nets;
    one.features = row.mode;
    one.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
    std::ostringstream name;
    name << "data" << (i < 9 ? "0" : "") << i + 1 << "_" << router_name(row.router)
         << "_k" << row.layers << "_n" << row.nets << "_"
         << feature_mode_name(row.mode) << ".jsonl";
    one.out = (fs::path(opt.out_dir) / name.str()).string();
    generate_one(one);
  }
  return kExitOk;
}

int cmd_train(const TrainOptions& opt) {
  WallClock clock;
  const Dataset data = load_dataset(opt.data);
  const std::string curve_path =
      opt.curve_out.empty() ? opt.out + ".loss.csv" : opt.curve_out;

  auto curve_csv = [](const TrainedArtifact& art) {
    std::string csv = "epoch,loss\n";
    for (std::size_t e = 0; e < art.loss_curve.size(); ++e)
      csv += std::to_string(e + 1) + "," + fmt("%.17g", art.loss_curve[e]) + "\n";
    return csv;
  };
  auto config_json = [&](const TrainConfig& c) {
    return json{{"data", opt.data},
                {"model", opt.model_id},
                {"epochs", c.epochs},
                {"units", c.hidden_units},
                {"lr", c.learning_rate},
                {"batch", c.batch_size},
                {"split", c.split_fraction},
                {"out", opt.out},
                {"curve_out", curve_path}};
  };

  if (opt.grid <= 0) {
    TrainConfig config;
    config.epochs = opt.epochs;
    config.hidden_units = opt.units;
    config.learning_rate = opt.learning_rate;
    config.batch_size = opt.batch_size;
    config.split_fraction = opt.split_fraction;
    config.seed = opt.seed;
    const TrainedArtifact art = train(data, opt.model_id, config);
    save_checkpoint(art.model, opt.out);
    write_text(curve_path, curve_csv(art));
    write_manifest(opt.out, "train", config_json(config), json{{"seed", config.seed}},
                   {opt.data}, {opt.out, curve_path}, clock.seconds(),
                   json{{"test_accuracy_pct", art.test_accuracy}});
    std::printf("model %d: test accuracy %.2f%% -> %s\n", opt.model_id,
                art.test_accuracy, opt.out.c_str());
    return kExitOk;
  }

  const GridSearchResult result = grid_search(data, opt.model_id, opt.grid, opt.seed,
                                              opt.batch_size, opt.split_fraction);
  save_checkpoint(result.best.model, opt.out);
  write_text(curve_path, curve_csv(result.best));
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const GridPoint& pt = result.points[i];
    const bool selected = static_cast<int>(i) == result.best_index;
    const json extra{{"test_accuracy_pct", pt.test_accuracy},
                     {"grid_index", i},
                     {"selected", selected}};
    if (selected) {
      write_manifest(opt.out, "train", config_json(pt.config),
                     json{{"seed", pt.config.seed}, {"grid_seed", opt.seed}},
                     {opt.data}, {opt.out, curve_path}, clock.seconds(), extra);
    } else {
      std::ostringstream stem;
      stem << opt.out << ".grid" << i;
      write_manifest(stem.str(), "train", config_json(pt.config),
                     json{{"seed", pt.config.seed}, {"grid_seed", opt.seed}},
                     {opt.data}, {}, clock.seconds(), extra);
    }
    std::printf("grid %2zu: epochs=%-4d units=%-3d lr=%-7g acc=%.2f%%%s\n", i,
                pt.config.epochs, pt.config.hidden_units, pt.config.learning_rate,
                pt.test_accuracy, selected ? "  [best]" : "");
  }
  std::printf("best: %.2f%% -> %s\n", result.best.test_accuracy, opt.out.c_str());
  return kExitOk;
}

int cmd_compare(const CompareOptions& opt) {
  WallClock clock;
  const Dataset data = load_dataset(opt.data);
  const int n_groups = static_cast<int>(data.groups.size());
  const GridGraph gk = problem_grid(data.params);
  const GridGraph g1 = compress(gk);

  std::vector<CompareRow> rows;

  for (const std::string& path : opt.checkpoints) {
    const MlpModel model = load_checkpoint(path);
    if (model.n_nets != data.params.n_nets)
      throw DataError("compare: checkpoint " + path + " expects " +
                      std::to_string(model.n_nets) + " nets");
    if (model.feature_mode != data.params.feature_mode)
      throw DataError("compare: checkpoint " + path + " feature mode mismatch");
    CompareRow row;
    row.method = "model" + std::to_string(model.model_id) + ":" +
                 checkpoint_stem(path);
    row.n = n_groups;
    for (const DataGroup& g : data.groups) {
      const NetOrdering predicted = predict_order(model, g.features.values);
      if (permutation_index(predicted.sequence) == g.optimal_index) ++row.matches;
    }
    rows.push_back(row);
  }

  {
    CompareRow row;
    row.method = "heuristic";
    row.n = n_groups;
    for (const DataGroup& g : data.groups) {
      GridGraph flat = g1;
      for (const Pin& p : g.pins) flat.pins.push_back({p.x, p.y, 1, p.net});
      CompressedSolution s;
      s.trees = g.trees;
      s.demand_map = recount_demand(g.trees, flat);
      const NetOrdering ordered =
          heuristic_order(s, flat, opt.alpha, opt.beta, opt.gamma);
      if (permutation_index(ordered.sequence) == g.optimal_index) ++row.matches;
    }
    rows.push_back(row);
  }

  {
    CompareRow row;
    row.method = "random";
    row.n = n_groups;
    SplitMix64 rng(opt.seed);
    for (const DataGroup& g : data.groups) {
      const NetOrdering drawn = random_order(data.params.n_nets, rng);
      if (permutation_index(drawn.sequence) == g.optimal_index) ++row.matches;
    }
    rows.push_back(row);
  }

  std::printf("dataset: %s (groups=%d, router=%s, k=%d, nets=%d, features=%s)\n",
              opt.data.c_str(), n_groups, router_name(data.params.router),
              data.params.layers, data.params.n_nets,
              feature_mode_name(data.params.feature_mode));
  std::printf("%-28s %10s %10s %12s\n", "method", "accuracy", "95% CI", "matches");
  for (const CompareRow& r : rows) {
    std::printf("%-28s %9.2f%% %9.2f%% %8d/%d\n", r.method.c_str(),
                r.accuracy_pct(), r.ci95_pct(), r.matches, r.n);
  }

  if (!opt.out_csv.empty()) {
    write_text(opt.out_csv, compare_csv(rows));
    write_manifest(opt.out_csv, "compare",
                   json{{"data", opt.data},
                        {"checkpoints", opt.checkpoints},
                        {"alpha", opt.alpha},
                        {"beta", opt.beta},
                        {"gamma", opt.gamma},
                        {"out", opt.out_csv}},
                   json{{"seed", opt.seed}},
                   [&] {
                     std::vector<std::string> in{opt.data};
                     in.insert(in.end(), opt.checkpoints.begin(),
                               opt.checkpoints.end());
                     return in;
                   }(),
                   {opt.out_csv}, clock.seconds());
  }
  return kExitOk;
}

int cmd_transfer(const TransferOptions& opt) {
  WallClock clock;
  const MlpModel model = load_checkpoint(opt.checkpoint);
  if (opt.min_layers < 1 || opt.max_layers < opt.min_layers)
    throw std::invalid_argument("transfer: bad layer range");

  std::string csv = "k,accuracy_pct,n_groups,seed\n";
  std::printf("%-4s %12s %10s\n", "k", "accuracy", "groups");
  for (int k = opt.min_layers; k <= opt.max_layers; ++k) {
    DatasetParams p;
    p.router = opt.router;
    p.layers = k;
    p.n_nets = model.n_nets;
    p.feature_mode = model.feature_mode;
    p.groups = opt.groups;
    p.width = opt.width;
    p.height = opt.height;
    p.pins_per_layer = opt.pins_per_layer;
    p.boundary_cap = opt.boundary_cap;
    p.via_cap = resolved_via_cap(opt.via_cap, opt.width, opt.height);
    p.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(k));
    const Dataset fresh = gen_dataset(p);
    const double acc = accuracy(model, fresh);
    csv += std::to_string(k) + "," + fmt("%.4f", acc) + "," +
           std::to_string(opt.groups) + "," + std::to_string(p.seed) + "\n";
    std::printf("%-4d %11.2f%% %10d\n", k, acc, opt.groups);
  }

  write_text(opt.out_csv, csv);
  write_manifest(opt.out_csv, "transfer", transfer_params_json(opt),
                 json{{"seed", opt.seed}}, {opt.checkpoint}, {opt.out_csv},
                 clock.seconds());
  return kExitOk;
}

int cmd_route(const RouteOptions& opt) {
  WallClock clock;
  DatasetParams p;
  p.router = opt.router;
  p.layers = opt.layers;
  p.n_nets = opt.nets;
  p.groups = 1;
  p.width = opt.width;
  p.height = opt.height;
  p.pins_per_layer = opt.pins_per_layer;
  p.boundary_cap = opt.boundary_cap;
  p.via_cap = resolved_via_cap(opt.via_cap, opt.width, opt.height);
  p.seed = opt.seed;
  if (p.layers < 1 || p.n_nets < 1 || p.width < 1 || p.height < 1)
    throw std::invalid_argument("route: dimensions and nets must be positive");

  GridGraph gk = problem_grid(p);
  gk.pins = gen_problem(p, opt.seed);
  const GridGraph g1 = compress(gk);
  const CompressedSolution s = route_all(g1, g1.nets(), p.router);

  NetOrdering ordering;
  std::string source = opt.order;
  if (opt.order == "oracle") {
    const auto ranked = rank_orderings(s, gk, true);
    for (const RankedOrdering& r : ranked)
      if (r.metrics.rank == 1) ordering = r.ordering;
  } else if (opt.order == "heuristic") {
    ordering = heuristic_order(s, g1, opt.alpha, opt.beta, opt.gamma);
  } else if (opt.order == "random") {
    ordering = random_order(opt.nets, derive_seed(opt.seed, 1));
  } else if (opt.order == "model") {
    if (opt.model_path.empty())
      throw std::invalid_argument("route: --order model needs --model <checkpoint>");
    const MlpModel model = load_checkpoint(opt.model_path);
    if (model.n_nets != opt.nets)
      throw DataError("route: checkpoint expects " + std::to_string(model.n_nets) +
                      " nets");
    const FeatureVector f = feature_vector(gk, g1, s, model.feature_mode);
    ordering = predict_order(model, f.values);
    source = "model:" + checkpoint_stem(opt.model_path);
  } else {
    // explicit comma-separated permutation
    std::istringstream in(opt.order);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        ordering.sequence.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("route: bad ordering token '" + tok + "'");
      }
    }
    std::vector<int> check = ordering.sequence;
    std::sort(check.begin(), check.end());
    std::vector<int> expect(static_cast<std::size_t>(opt.nets));
    std::iota(expect.begin(), expect.end(), 0);
    if (check != expect)
      throw std::invalid_argument("route: --order must be a permutation of 0.." +
                                  std::to_string(opt.nets - 1));
    source = "explicit";
  }

  const auto [assigned, metrics] =
      assign_ordered(s, ordering.sequence, gk, opt.mode, false);

  std::string order_text;
  for (std::size_t i = 0; i < ordering.sequence.size(); ++i)
    order_text += (i ? "," : "") + std::to_string(ordering.sequence[i]);

  std::printf("problem: %dx%d grid, k=%d, nets=%d, pins/layer=%d, router=%s, seed=%llu\n",
              p.width, p.height, p.layers, p.n_nets, p.pins_per_layer,
              router_name(p.router),
              static_cast<unsigned long long>(opt.seed));
  std::printf("ordering (%s): %s\n", source.c_str(), order_text.c_str());
  for (int layer = 1; layer <= p.layers; ++layer) {
    long long used = 0, overflow = 0;
    for (int e = 0; e < gk.edge_count(); ++e) {
      const EdgeInfo& info = gk.edge_info(e);
      if (info.kind != EdgeKind::Boundary || info.layer != layer) continue;
      used += assigned.demand[static_cast<std::size_t>(e)];
      overflow += edge_overflow(assigned.demand[static_cast<std::size_t>(e)],
                                gk.edges[static_cast<std::size_t>(e)].capacity);
    }
    std::printf("layer %d: boundary demand %lld, overflow %lld\n", layer, used,
                overflow);
  }
  std::printf("vias: %d\n", metrics.via_count);
  std::printf("total overflow: %lld  max overflow: %d\n", metrics.total_overflow,
              metrics.max_overflow);
  std::printf("wirelength: %s  score: %s\n", fmt("%.1f", metrics.wirelength).c_str(),
              fmt("%.1f", metrics.wirelength).c_str());

  if (!opt.emit_json.empty()) {
    json pins = json::array();
    for (const Pin& q : gk.pins)
      pins.push_back(json::array({q.x, q.y, q.layer, q.net}));
    json trees = json::array();
    for (const AssignedTree& t : assigned.trees) {
      json edges = json::array();
      for (int e : t.boundary_edges) {
        const EdgeInfo& info = gk.edge_info(e);
        edges.push_back(json{{"x", info.x},
                             {"y", info.y},
                             {"dir", info.dir == 0 ? "x" : "y"},
                             {"layer", info.layer}});
      }
      json vias = json::array();
      for (int e : t.via_edges) {
        const EdgeInfo& info = gk.edge_info(e);
        vias.push_back(json{{"x", info.x}, {"y", info.y}, {"lower_layer", info.layer}});
      }
      trees.push_back(json{{"net", t.net}, {"edges", edges}, {"vias", vias}});
    }
    json out{{"problem",
              json{{"width", p.width},
                   {"height", p.height},
                   {"k", p.layers},
                   {"n_nets", p.n_nets},
                   {"pins", pins}}},
             {"ordering", ordering.sequence},
             {"ordering_source", source},
             {"trees", trees},
             {"metrics", json{{"total_overflow", metrics.total_overflow},
                              {"max_overflow", metrics.max_overflow},
                              {"wirelength", metrics.wirelength},
                              {"via_count", metrics.via_count}}}};
    write_text(opt.emit_json, out.dump(2) + "\n");
    write_manifest(opt.emit_json, "route",
                   json{{"router", router_name(p.router)},
                        {"layers", p.layers},
                        {"nets", p.n_nets},
                        {"width", p.width},
                        {"height", p.height},
                        {"pins_per_layer", p.pins_per_layer},
                        {"boundary_cap", p.boundary_cap},
                        {"via_cap", p.via_cap},
                        {"order", opt.order},
                        {"model", opt.model_path},
                        {"alpha", opt.alpha},
                        {"beta", opt.beta},
                        {"gamma", opt.gamma},
                        {"mode", opt.mode == AssignMode::Strict ? "strict" : "overflow-min"},
                        {"out", opt.emit_json}},
                   json{{"seed", opt.seed}},
                   opt.model_path.empty() ? std::vector<std::string>{}
                                          : std::vector<std::string>{opt.model_path},
                   {opt.emit_json}, clock.seconds());
  }
  return kExitOk;
}

std::vector<std::pair<std::string, std::string>> replay_manifest(
    const std::string& manifest_path, const std::string& scratch_dir) {
  json m;
  try {
    m = json::parse(read_text(manifest_path));
  } catch (const json::parse_error& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  const std::string command = m.at("command").get<std::string>();
  const json& params = m.at("params");
  fs::create_directories(scratch_dir);
  auto redirect = [&](const std::string& original) {
    return (fs::path(scratch_dir) / fs::path(original).filename()).string();
  };

  std::vector<std::pair<std::string, std::string>> artifacts;
  for (const json& out : m.at("outputs"))
    artifacts.emplace_back(out.get<std::string>(), redirect(out.get<std::string>()));
  if (artifacts.empty()) return artifacts;

  if (command == "gen") {
    GenOptions o;
    o.router = router_from_name(params.at("router").get<std::string>());
    o.layers = params.at("layers").get<int>();
    o.nets = params.at("nets").get<int>();
    o.features = feature_mode_from_name(params.at("features").get<std::string>());
    o.groups = params.at("groups").get<int>();
    o.width = params.at("width").get<int>();
    o.height = params.at("height").get<int>();
    o.pins_per_layer = params.at("pins_per_layer").get<int>();
    o.boundary_cap = params.at("boundary_cap").get<int>();
    o.via_cap = params.at("via_cap").get<int>();
    o.seed = m.at("seeds").at("seed").get<std::uint64_t>();
    o.out = artifacts.front().second;
    cmd_gen(o);
  } else if (command == "train") {
    TrainOptions o;
    o.data = params.at("data").get<std::string>();
    o.model_id = params.at("model").get<int>();
    o.epochs = params.at("epochs").get<int>();
    o.units = params.at("units").get<int>();
    o.learning_rate = params.at("lr").get<double>();
    o.batch_size = params.at("batch").get<int>();
    o.split_fraction = params.at("split").get<double>();
    o.seed = m.at("seeds").at("seed").get<std::uint64_t>();
    o.out = redirect(params.at("out").get<std::string>());
    o.curve_out = redirect(params.at("curve_out").get<std::string>());
    o.grid = 0; // the manifest pins the winning configuration
    cmd_train(o);
  } else if (command == "compare") {
    CompareOptions o;
    o.data = params.at("data").get<std::string>();
    o.checkpoints = params.at("checkpoints").get<std::vector<std::string>>();
    o.alpha = params.at("alpha").get<double>();
    o.beta = params.at("beta").get<double>();
    o.gamma = params.at("gamma").get<double>();
    o.seed = m.at("seeds").at("seed").get<std::uint64_t>();
    o.out_csv = redirect(params.at("out").get<std::string>());
    cmd_compare(o);
  } else if (command == "transfer") {
    TransferOptions o;
    o.checkpoint = params.at("checkpoint").get<std::string>();
    o.router = router_from_name(params.at("router").get<std::string>());
    o.min_layers = params.at("min_layers").get<int>();
    o.max_layers = params.at("max_layers").get<int>();
    o.groups = params.at("groups").get<int>();
    o.width = params.at("width").get<int>();
    o.height = params.at("height").get<int>();
    o.pins_per_layer = params.at("pins_per_layer").get<int>();
    o.boundary_cap = params.at("boundary_cap").get<int>();
    o.via_cap = params.at("via_cap").get<int>();
    o.seed = m.at("seeds").at("seed").get<std::uint64_t>();
    o.out_csv = redirect(params.at("out").get<std::string>());
    cmd_transfer(o);
  } else if (command == "route") {
    RouteOptions o;
    o.router = router_from_name(params.at("router").get<std::string>());
    o.layers = params.at("layers").get<int>();
    o.nets = params.at("nets").get<int>();
    o.width = params.at("width").get<int>();
    o.height = params.at("height").get<int>();
    o.pins_per_layer = params.at("pins_per_layer").get<int>();
    o.boundary_cap = params.at("boundary_cap").get<int>();
    o.via_cap = params.at("via_cap").get<int>();
    o.order = params.at("order").get<std::string>();
    o.model_path = params.at("model").get<std::string>();
    o.alpha = params.at("alpha").get<double>();
    o.beta = params.at("beta").get<double>();
    o.gamma = params.at("gamma").get<double>();
    o.mode = params.at("mode").get<std::string>() == "strict"
                 ? AssignMode::Strict
                 : AssignMode::OverflowMin;
    o.seed = m.at("seeds").at("seed").get<std::uint64_t>();
    o.emit_json = redirect(params.at("out").get<std::string>());
    cmd_route(o);
  } else {
    throw DataError("manifest: unknown command '" + command + "'");
  }
  return artifacts;
}

} // namespace gridroute
