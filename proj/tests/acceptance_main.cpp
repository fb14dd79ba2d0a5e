// Acceptance suite: end-to-end checks with pinned tolerances. Each criterion
// prints one PASS/FAIL line; the process exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gridroute/commands.hpp"
#include "gridroute/datagen.hpp"
#include "gridroute/errors.hpp"
#include "gridroute/grid.hpp"
#include "gridroute/layer_assign.hpp"
#include "gridroute/mlp.hpp"
#include "gridroute/ordering.hpp"
#include "gridroute/rng.hpp"
#include "gridroute/route2d.hpp"
#include "gridroute/train.hpp"
#include "oracles.hpp"

using namespace gridroute;
using gridroute::testing::AssignmentCost;
using gridroute::testing::enumerate_best_assignment;
using gridroute::testing::realized_cost;
using gridroute::testing::steiner_opt_bruteforce;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DatasetParams base_params(RouterKind router, int layers, int nets,
                          FeatureMode mode, int groups, std::uint64_t seed) {
  DatasetParams p;
  p.router = router;
  p.layers = layers;
  p.n_nets = nets;
  p.feature_mode = mode;
  p.groups = groups;
  p.seed = seed;
  return p;
}

double random_baseline_accuracy(const Dataset& d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  int matches = 0;
  for (const DataGroup& g : d.groups) {
    const NetOrdering o = random_order(d.params.n_nets, rng);
    if (permutation_index(o.sequence) == g.optimal_index) ++matches;
  }
  return 100.0 * matches / static_cast<double>(d.groups.size());
}

// criterion 1: random ordering hits the analytic 1/n! rate
Outcome criterion_random_baseline() {
  const Dataset d3 =
      gen_dataset(base_params(RouterKind::Kruskal, 2, 3, FeatureMode::Full, 2000, 101));
  const double acc3 = random_baseline_accuracy(d3, 555);

  const Dataset d5 =
      gen_dataset(base_params(RouterKind::Kruskal, 2, 5, FeatureMode::Full, 2000, 102));
  const double acc5 = random_baseline_accuracy(d5, 556);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "3 nets: %.2f%% (want 16.67 +/- 2.5), 5 nets: %.2f%% (want 0.83 +/- 0.6)",
                acc3, acc5);
  const bool ok = std::abs(acc3 - 16.67) <= 2.5 && std::abs(acc5 - 0.83) <= 0.6;
  return {ok, buf};
}

// criterion 2: stored rank-1 rows are undominated on re-evaluation
Outcome criterion_oracle_consistency() {
  const DatasetParams p =
      base_params(RouterKind::Kruskal, 2, 3, FeatureMode::Full, 200, 202);
  GridGraph gk = problem_grid(p);
  const GridGraph g1 = compress(gk);

  for (int i = 0; i < p.groups; ++i) {
    const std::uint64_t seed = derive_seed(p.seed, static_cast<std::uint64_t>(i));
    const DataGroup g = gen_group(p, seed);
    gk.pins = gen_problem(p, seed);

    CompressedSolution s;
    s.trees = g.trees;
    s.demand_map = recount_demand(g.trees, g1);

    OrderingMetrics best;
    best.total_overflow = g.table[static_cast<std::size_t>(g.optimal_index)].total_overflow;
    best.max_overflow = g.table[static_cast<std::size_t>(g.optimal_index)].max_overflow;
    best.score = g.table[static_cast<std::size_t>(g.optimal_index)].score;

    for (long long h = 0; h < factorial(p.n_nets); ++h) {
      const auto [solution, am] = assign_ordered(
          s, permutation_at(p.n_nets, h), gk, AssignMode::OverflowMin, false);
      OrderingMetrics fresh;
      fresh.total_overflow = am.total_overflow;
      fresh.max_overflow = am.max_overflow;
      fresh.score = am.wirelength;
      if (compare_optimality(fresh, best) == Dominance::ABetter) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "group %d: permutation %lld dominates the stored optimum",
                      i, h);
        return {false, buf};
      }
      const PermutationRecord& row = g.table[static_cast<std::size_t>(h)];
      if (fresh.total_overflow != row.total_overflow ||
          fresh.max_overflow != row.max_overflow ||
          am.wirelength != row.wirelength) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "group %d: permutation %lld metrics drifted", i, h);
        return {false, buf};
      }
    }
  }
  return {true, "200 groups, every stored rank-1 row undominated"};
}

// random single-net instance for criteria 3: tree <= 6 edges, k <= 3
struct SolaInstance {
  GridGraph gk;
  RoutingTree tree;
  std::vector<int> demand;
};

SolaInstance random_sola_instance(SplitMix64& rng) {
  const int k = 1 + static_cast<int>(rng.below(3));
  SolaInstance inst{build_grid(3, 3, k, 1 + static_cast<int>(rng.below(2)),
                               1 + static_cast<int>(rng.below(2))),
                    {},
                    {}};
  while (true) {
    inst.gk.pins.clear();
    const int n_pins = 2 + static_cast<int>(rng.below(3));
    for (int q = 0; q < n_pins; ++q) {
      const int cell = static_cast<int>(rng.below(9));
      inst.gk.pins.push_back({cell % 3, cell / 3,
                              1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k))),
                              0});
    }
    std::vector<int> pos;
    for (const Pin& q : inst.gk.pins) pos.push_back(q.y * 3 + q.x);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.size() < 2) continue;
    inst.tree = route_net_steiner(compress(inst.gk), 0, pos);
    if (inst.tree.edges.size() <= 6) break;
  }
  inst.demand.assign(static_cast<std::size_t>(inst.gk.edge_count()), 0);
  for (int& d : inst.demand) d = static_cast<int>(rng.below(3));
  return inst;
}

// criterion 3: sola equals the exhaustive lexicographic minimum
Outcome criterion_sola_optimal() {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    SolaInstance inst = random_sola_instance(rng);
    std::vector<int> demand = inst.demand;
    const AssignedTree a =
        sola_assign(orient(inst.tree, canonical_root(inst.gk, 0), inst.gk), inst.gk,
                    demand, AssignMode::OverflowMin);
    const AssignmentCost got = realized_cost(a, inst.gk, inst.demand);
    const AssignmentCost want = enumerate_best_assignment(inst.tree, inst.gk, inst.demand);
    if (got != want) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "trial %d: sola (%lld, %d) vs oracle (%lld, %d)", trial,
                    got.overflow_added, got.via_count, want.overflow_added,
                    want.via_count);
      return {false, buf};
    }
  }
  return {true, "100 instances match the enumeration oracle exactly"};
}

// criterion 4: strict mode keeps overflow at zero, by independent recount
Outcome criterion_strict_zero_overflow() {
  const DatasetParams p =
      base_params(RouterKind::Kruskal, 2, 3, FeatureMode::Full, 0, 404);
  GridGraph gk = problem_grid(p);
  const GridGraph bare = compress(gk);

  int feasible = 0;
  for (std::uint64_t seed = 0; feasible < 500 && seed < 5000; ++seed) {
    gk.pins = gen_problem(p, derive_seed(p.seed, seed));
    GridGraph g1 = bare;
    for (const Pin& q : gk.pins) g1.pins.push_back({q.x, q.y, 1, q.net});
    const CompressedSolution s = route_all(g1, g1.nets(), p.router);
    std::vector<int> order(static_cast<std::size_t>(p.n_nets));
    std::iota(order.begin(), order.end(), 0);
    try {
      const auto [solution, metrics] =
          assign_ordered(s, order, gk, AssignMode::Strict, false);
      ++feasible;

      // recount demand from the assigned trees themselves
      std::vector<int> recount(static_cast<std::size_t>(gk.edge_count()), 0);
      for (const AssignedTree& t : solution.trees) {
        for (int e : t.boundary_edges) ++recount[static_cast<std::size_t>(e)];
        for (int e : t.via_edges) ++recount[static_cast<std::size_t>(e)];
      }
      if (recount != solution.demand)
        return {false, "assigned demand map does not match tree recount"};
      for (int e = 0; e < gk.edge_count(); ++e) {
        if (edge_overflow(recount[static_cast<std::size_t>(e)],
                          gk.edges[static_cast<std::size_t>(e)].capacity) != 0)
          return {false, "strict assignment overflowed an edge"};
      }
      if (metrics.total_overflow != 0 || metrics.max_overflow != 0)
        return {false, "strict metrics report nonzero overflow"};
    } catch (const InfeasibleError&) {
      continue; // not a feasible instance
    }
  }
  if (feasible < 500) return {false, "could not collect 500 feasible instances"};
  return {true, "500 feasible instances, overflow exactly 0 on every edge"};
}

// criterion 5: 2-terminal = Manhattan; KMB within 2x of the Steiner optimum
Outcome criterion_router_correctness() {
  const GridGraph g5 = build_grid(5, 5, 1, 2, 2);
  for (int a = 0; a < 25; ++a) {
    for (int b = a + 1; b < 25; ++b) {
      const double manhattan =
          std::abs(a % 5 - b % 5) + std::abs(a / 5 - b / 5);
      if (route_net_kruskal(g5, 0, {a, b}).wirelength(g5) != manhattan ||
          route_net_steiner(g5, 0, {a, b}).wirelength(g5) != manhattan)
        return {false, "a 2-terminal route missed the Manhattan distance"};
    }
  }

  const GridGraph g3 = build_grid(3, 3, 1, 2, 2);
  int instances = 0;
  std::vector<int> terminals;
  // every 2-, 3- and 4-terminal subset of the 3x3 grid
  for (unsigned mask = 0; mask < 512; ++mask) {
    terminals.clear();
    for (int v = 0; v < 9; ++v)
      if (mask & (1u << v)) terminals.push_back(v);
    if (terminals.size() < 2 || terminals.size() > 4) continue;
    ++instances;
    const double opt = steiner_opt_bruteforce(g3, terminals);
    const double got = route_net_steiner(g3, 0, terminals).wirelength(g3);
    if (got > 2.0 * opt || got < opt) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "mask %u: KMB %.0f vs OPT %.0f", mask, got, opt);
      return {false, buf};
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "300 two-terminal pairs exact, %d KMB instances within 2x OPT",
                instances);
  return {true, buf};
}

// criterion 6: analytic gradients vs central finite differences
Outcome criterion_gradient_fidelity() {
  SplitMix64 rng(606);
  const Activation firsts[] = {Activation::Tanh, Activation::Relu,
                               Activation::Identity};
  struct Head {
    Activation act;
    LossKind loss;
  };
  const Head heads[] = {{Activation::Softmax, LossKind::Mse},
                        {Activation::Tanh, LossKind::Mse},
                        {Activation::Identity, LossKind::Mse},
                        {Activation::Softmax, LossKind::Ce},
                        {Activation::Tanh, LossKind::Ce}};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    MlpModel m;
    m.layer_dims = {5, 5, 5, 5};
    m.activations = {firsts[trial % 3], Activation::Identity,
                     heads[trial % 5].act};
    m.loss = heads[trial % 5].loss;
    for (int l = 0; l < 3; ++l) {
      std::vector<double> w(25);
      for (double& v : w) v = 1.6 * rng.unit() - 0.8;
      m.weights.push_back(std::move(w));
      std::vector<double> b(5);
      for (double& v : b) v = rng.unit() - 0.5;
      m.biases.push_back(std::move(b));
    }
    m.feat_mean.assign(5, 0.0);
    m.feat_std.assign(5, 1.0);

    std::vector<double> x(5);
    for (double& v : x) v = 3.0 * rng.unit() - 1.5;
    std::vector<double> target(5, 0.0);
    if (m.loss == LossKind::Ce)
      target[rng.below(5)] = 1.0;
    else
      for (double& v : target) v = rng.unit();

    Gradients grads;
    batch_gradients(m, {&x}, {&target}, grads);
    const double h = 1e-5;
    auto check = [&](double& param, double analytic) {
      const double orig = param;
      param = orig + h;
      const double up = sample_loss(m, x, target);
      param = orig - h;
      const double down = sample_loss(m, x, target);
      param = orig;
      const double fd = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(analytic - fd) /
                                  std::max({1.0, std::abs(analytic), std::abs(fd)}));
    };
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      for (std::size_t i = 0; i < m.weights[l].size(); ++i)
        check(m.weights[l][i], grads.weights[l][i]);
      for (std::size_t i = 0; i < m.biases[l].size(); ++i)
        check(m.biases[l][i], grads.biases[l][i]);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "20 models, worst relative error %.2e", worst);
  return {worst <= 1e-5, buf};
}

// criteria 7 and 8 share the trained model
struct LearnResult {
  Outcome outcome;
  MlpModel best_model;
  bool trained = false;
};

LearnResult criterion_learning_beats_heuristic() {
  LearnResult result;
  const Dataset data =
      gen_dataset(base_params(RouterKind::Kruskal, 2, 3, FeatureMode::Full, 500, 707));

  TrainConfig probe;
  probe.seed = 808;
  const std::vector<int> test = test_split_indices(500, probe);

  // heuristic and random baselines on the same held-out groups
  const GridGraph gk = problem_grid(data.params);
  const GridGraph g1 = compress(gk);
  int heuristic_matches = 0;
  SplitMix64 random_rng(909);
  int random_matches = 0;
  for (int gi : test) {
    const DataGroup& g = data.groups[static_cast<std::size_t>(gi)];
    GridGraph flat = g1;
    for (const Pin& p : g.pins) flat.pins.push_back({p.x, p.y, 1, p.net});
    CompressedSolution s;
    s.trees = g.trees;
    s.demand_map = recount_demand(g.trees, g1);
    if (permutation_index(heuristic_order(s, flat, 1, 1, 1).sequence) ==
        g.optimal_index)
      ++heuristic_matches;
    if (permutation_index(random_order(3, random_rng).sequence) == g.optimal_index)
      ++random_matches;
  }
  const double heuristic_acc =
      100.0 * heuristic_matches / static_cast<double>(test.size());
  const double random_acc =
      100.0 * random_matches / static_cast<double>(test.size());

  double best_acc = -1.0;
  int best_id = 0;
  for (int model_id : {1, 2}) {
    const GridSearchResult r = grid_search(data, model_id, 27, probe.seed);
    if (r.best.test_accuracy > best_acc) {
      best_acc = r.best.test_accuracy;
      best_id = model_id;
      result.best_model = r.best.model;
      result.trained = true;
    }
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "model %d: %.2f%% vs heuristic %.2f%% (need >= %.2f) and random "
                "%.2f%% (need >= %.2f)",
                best_id, best_acc, heuristic_acc, 1.5 * heuristic_acc, random_acc,
                random_acc + 5.0);
  result.outcome = {best_acc >= 1.5 * heuristic_acc && best_acc >= random_acc + 5.0,
                    buf};
  return result;
}

Outcome criterion_transferability(const LearnResult& learned) {
  if (!learned.trained) return {false, "no trained model available"};
  const double random_plus5 = 100.0 / 6.0 + 5.0;
  std::string detail;
  bool ok = true;
  for (int k = 2; k <= 6; ++k) {
    const Dataset fresh = gen_dataset(base_params(
        RouterKind::Kruskal, k, 3, FeatureMode::Full, 300,
        derive_seed(811, static_cast<std::uint64_t>(k))));
    const double acc = accuracy(learned.best_model, fresh);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "k=%d: %.2f%% ", k, acc);
    detail += buf;
    if (acc < random_plus5) ok = false;
  }
  detail += "(need >= 21.67)";
  return {ok, detail};
}

// criterion 9: manifests replay to byte-identical artifacts
Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "gridroute_acceptance9";
  fs::remove_all(dir);
  fs::create_directories(dir);

  GenOptions gen;
  gen.groups = 40;
  gen.seed = 910;
  gen.out = (dir / "d.jsonl").string();
  cmd_gen(gen);

  TrainOptions train;
  train.data = gen.out;
  train.model_id = 1;
  train.epochs = 12;
  train.units = 16;
  train.seed = 911;
  train.out = (dir / "m.json").string();
  cmd_train(train);

  CompareOptions compare;
  compare.data = gen.out;
  compare.checkpoints = {train.out};
  compare.seed = 912;
  compare.out_csv = (dir / "cmp.csv").string();
  cmd_compare(compare);

  for (const char* artifact : {"d.jsonl", "m.json", "cmp.csv"}) {
    const std::string manifest = (dir / (std::string(artifact) + ".manifest.json")).string();
    const auto pairs = replay_manifest(manifest, (dir / "replay").string());
    if (pairs.empty()) return {false, std::string(artifact) + ": no outputs to replay"};
    for (const auto& [original, replayed] : pairs) {
      if (slurp(original) != slurp(replayed))
        return {false, std::string(artifact) + ": replay differs"};
    }
  }
  fs::remove_all(dir);
  return {true, "dataset, checkpoint and report all replay byte-identically"};
}

// criterion 10: serialization round-trips on randomized instances
Outcome criterion_round_trips() {
  SplitMix64 rng(1010);
  for (int trial = 0; trial < 6; ++trial) {
    DatasetParams p;
    p.router = rng.below(2) ? RouterKind::Steiner : RouterKind::Kruskal;
    p.layers = 1 + static_cast<int>(rng.below(3));
    p.n_nets = 3 + static_cast<int>(rng.below(2));
    p.feature_mode = rng.below(2) ? FeatureMode::Full : FeatureMode::Reduced;
    p.groups = 3;
    p.boundary_cap = 1 + static_cast<int>(rng.below(3));
    p.seed = rng.next();
    const Dataset d = gen_dataset(p);
    const std::string text = dataset_to_jsonl(d);
    const Dataset back = dataset_from_jsonl(text);
    if (!(back == d)) return {false, "dataset in-memory round trip failed"};
    if (dataset_to_jsonl(back) != text) return {false, "dataset bytes drifted"};
  }
  for (int trial = 0; trial < 6; ++trial) {
    MlpModel m = make_model(1 + static_cast<int>(rng.below(3)), 16,
                            5 + static_cast<int>(rng.below(30)), 3,
                            rng.below(2) ? FeatureMode::Full : FeatureMode::Reduced,
                            rng.next());
    for (std::size_t i = 0; i < m.feat_mean.size(); ++i) {
      m.feat_mean[i] = 20.0 * rng.unit() - 10.0;
      m.feat_std[i] = rng.unit() + 0.25;
    }
    const std::string text = checkpoint_to_json(m);
    const MlpModel back = checkpoint_from_json(text);
    if (!(back == m)) return {false, "checkpoint in-memory round trip failed"};
    if (checkpoint_to_json(back) != text) return {false, "checkpoint bytes drifted"};
  }
  return {true, "randomized dataset and checkpoint round trips are bit-exact"};
}

} // namespace

int main() {
  int failures = 0;
  LearnResult learned;

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"random-baseline reproduction", criterion_random_baseline},
      {"oracle self-consistency", criterion_oracle_consistency},
      {"SOLA optimality", criterion_sola_optimal},
      {"zero-overflow guarantee", criterion_strict_zero_overflow},
      {"router correctness", criterion_router_correctness},
      {"gradient fidelity", criterion_gradient_fidelity},
      {"learning beats heuristic",
       [&] {
         learned = criterion_learning_beats_heuristic();
         return learned.outcome;
       }},
      {"transferability", [&] { return criterion_transferability(learned); }},
      {"determinism", criterion_determinism},
      {"format round-trips", criterion_round_trips},
  };

  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %zu (%s): %s — %s [%.1fs]\n", i + 1, criteria[i].name,
                out.pass ? "PASS" : "FAIL", out.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
