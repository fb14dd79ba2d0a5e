#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridroute/datagen.hpp"
#include "gridroute/layer_assign.hpp"

namespace gridroute {

// Command implementations behind the CLI. Every artifact-producing command
// writes a `<artifact>.manifest.json` recording the command, parameters,
// seeds, inputs/outputs, tool version and wall time; re-running a manifest
// reproduces its artifacts byte for byte.

struct GenOptions {
  RouterKind router = RouterKind::Kruskal;
  int layers = 2;
  int nets = 3;
  FeatureMode features = FeatureMode::Full;
  int groups = 500;
  std::uint64_t seed = 0;
  int width = 5;
  int height = 5;
  int pins_per_layer = 15;
  int boundary_cap = 1;
  int via_cap = -1; // -1: width*height
  std::string out;  // single-dataset mode; empty derives a name
  bool paper_matrix = false;
  std::string out_dir = ".";
};
int cmd_gen(const GenOptions& opt);

struct TrainOptions {
  std::string data;
  int model_id = 1;
  int epochs = 100;
  int units = 40;
  double learning_rate = 0.001;
  int batch_size = 32;
  double split_fraction = 0.8;
  std::uint64_t seed = 0;
  std::string out = "checkpoint.json";
  std::string curve_out; // empty: <out>.loss.csv
  int grid = 0;          // >0: run that many grid configurations, keep the best
};
int cmd_train(const TrainOptions& opt);

struct CompareOptions {
  std::string data;
  std::vector<std::string> checkpoints;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  std::string out_csv; // optional
};
int cmd_compare(const CompareOptions& opt);

struct TransferOptions {
  std::string checkpoint;
  RouterKind router = RouterKind::Kruskal;
  int min_layers = 2;
  int max_layers = 6;
  int groups = 300;
  std::uint64_t seed = 0;
  std::string out_csv = "transfer.csv";
  int width = 5;
  int height = 5;
  int pins_per_layer = 15;
  int boundary_cap = 1;
  int via_cap = -1;
};
int cmd_transfer(const TransferOptions& opt);

struct RouteOptions {
  std::uint64_t seed = 0;
  RouterKind router = RouterKind::Kruskal;
  int layers = 2;
  int nets = 3;
  int width = 5;
  int height = 5;
  int pins_per_layer = 15;
  int boundary_cap = 1;
  int via_cap = -1;
  std::string order = "oracle"; // oracle|heuristic|model|random|m1,m2,...
  std::string model_path;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  AssignMode mode = AssignMode::OverflowMin;
  std::string emit_json; // optional dump path
};
int cmd_route(const RouteOptions& opt);

/// Re-runs the command recorded in a manifest, redirecting its outputs into
/// scratch_dir. Returns (original, replayed) artifact path pairs.
std::vector<std::pair<std::string, std::string>> replay_manifest(
    const std::string& manifest_path, const std::string& scratch_dir);

/// Derived single-dataset output name, e.g. data_ka_k2_n3_full_g500_s7.jsonl.
std::string default_dataset_name(const GenOptions& opt);

// Exit codes shared by the CLI: 0 ok, 2 usage, 3 data, 4 infeasible.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInfeasible = 4;

} // namespace gridroute
