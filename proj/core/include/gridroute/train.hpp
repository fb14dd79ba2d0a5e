#pragma once

#include <cstdint>
#include <vector>

#include "gridroute/datagen.hpp"
#include "gridroute/mlp.hpp"
#include "gridroute/ordering.hpp"

namespace gridroute {

struct TrainConfig {
  int epochs = 100;
  int hidden_units = 40;
  double learning_rate = 0.001;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double split_fraction = 0.8;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainedArtifact {
  MlpModel model;
  std::vector<double> loss_curve; // mean training loss per epoch
  double test_accuracy = 0.0;     // percent on the held-out split
  TrainConfig config;
};

/// Trains one of the three models on a dataset. Deterministic: the split,
/// the initialization and the per-epoch batch order all derive from
/// config.seed. Targets are one-hot at the group's optimal permutation index.
TrainedArtifact train(const Dataset& data, int model_id, const TrainConfig& config);

/// Test-split group indices for a given seed (the complement trains).
std::vector<int> test_split_indices(int n_groups, const TrainConfig& config);

/// Most probable permutation for a raw (unstandardized) feature vector.
/// Ties resolve to the lowest canonical index.
NetOrdering predict_order(const MlpModel& m, const std::vector<double>& features);

/// Percent of groups whose predicted ordering matches the oracle optimum.
double accuracy(const MlpModel& m, const Dataset& data);
double accuracy_on(const MlpModel& m, const Dataset& data,
                   const std::vector<int>& group_indices);

struct GridPoint {
  TrainConfig config;
  double test_accuracy = 0.0;
};

struct GridSearchResult {
  TrainedArtifact best;
  int best_index = -1;
  std::vector<GridPoint> points;
};

/// Deterministic hyperparameter schedule: the 27 desk-scale configurations
/// (epochs {50,100,200} x units {20,40,80} x lr {0.001,0.003,0.005}) first,
/// then the remaining full grid in canonical order. `budget` caps how many
/// run. Per-point seeds derive from base_seed.
std::vector<TrainConfig> grid_schedule(int budget, std::uint64_t base_seed,
                                       int batch_size, double split_fraction);

/// Runs the schedule and keeps the checkpoint with the best test accuracy
/// (first on ties).
GridSearchResult grid_search(const Dataset& data, int model_id, int budget,
                             std::uint64_t base_seed, int batch_size = 32,
                             double split_fraction = 0.8);

} // namespace gridroute
