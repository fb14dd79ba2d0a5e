#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridroute/features.hpp"
#include "gridroute/grid.hpp"
#include "gridroute/ordering.hpp"
#include "gridroute/route2d.hpp"

namespace gridroute {

struct DatasetParams {
  RouterKind router = RouterKind::Kruskal;
  int layers = 2;
  int n_nets = 3;
  FeatureMode feature_mode = FeatureMode::Full;
  int groups = 2500;
  int width = 5;
  int height = 5;
  int pins_per_layer = 15;
  int boundary_cap = 1;
  int via_cap = 25; // width*height by default: effectively unbounded
  std::uint64_t seed = 0;

  friend bool operator==(const DatasetParams&, const DatasetParams&) = default;
};

/// One row of a group's ordering table, in canonical permutation order.
struct PermutationRecord {
  long long total_overflow = 0;
  int max_overflow = 0;
  double wirelength = 0.0;
  double score = 0.0;
  int rank = 0;

  friend bool operator==(const PermutationRecord&, const PermutationRecord&) = default;
};

/// One routing problem with its 2D solution, features and the fully ranked
/// ordering table.
struct DataGroup {
  std::vector<Pin> pins;
  std::vector<RoutingTree> trees;
  FeatureVector features;
  std::vector<PermutationRecord> table; // n_nets! entries
  int optimal_index = 0;                // canonical index of the rank-1 permutation

  friend bool operator==(const DataGroup&, const DataGroup&) = default;
};

struct Dataset {
  DatasetParams params;
  std::vector<DataGroup> groups;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Grid for a dataset's routing problems (no pins attached).
GridGraph problem_grid(const DatasetParams& p);

/// Random problem: per layer, pins_per_layer distinct vertices, each assigned
/// to a uniform net; resampled until every net has at least two pins on at
/// least two distinct compressed positions. Throws GenerationError after
/// 1000 attempts.
std::vector<Pin> gen_problem(const DatasetParams& p, std::uint64_t group_seed);

/// Full pipeline for one group: compress, route, features, rank all
/// orderings with deterministic time.
DataGroup gen_group(const DatasetParams& p, std::uint64_t group_seed);

/// N groups with per-group derived seeds.
Dataset gen_dataset(const DatasetParams& p);

/// Reconstructs the demand map from the stored trees.
std::vector<int> recount_demand(const std::vector<RoutingTree>& trees,
                                const GridGraph& g1);

// JSON Lines serialization: line 1 is the header, then one group per line.
// Unknown fields are rejected on load.
std::string dataset_to_jsonl(const Dataset& d);
Dataset dataset_from_jsonl(const std::string& text);
void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

const char* router_name(RouterKind r);
RouterKind router_from_name(const std::string& name);
const char* feature_mode_name(FeatureMode m);
FeatureMode feature_mode_from_name(const std::string& name);

} // namespace gridroute
