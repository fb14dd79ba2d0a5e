#include "gridroute/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gridroute/errors.hpp"
#include "gridroute/rng.hpp"

namespace gridroute {

namespace {

std::vector<int> split_order(int n_groups, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(n_groups));
  std::iota(idx.begin(), idx.end(), 0);
  SplitMix64 rng(derive_seed(seed, 0));
  rng.shuffle(idx);
  return idx;
}

int train_count(int n_groups, double split_fraction) {
  int n = static_cast<int>(std::llround(split_fraction * n_groups));
  n = std::max(n, 1);
  if (n_groups >= 2) n = std::min(n, n_groups - 1);
  return n;
}

} // namespace

std::vector<int> test_split_indices(int n_groups, const TrainConfig& config) {
  const std::vector<int> idx = split_order(n_groups, config.seed);
  const int n_train = train_count(n_groups, config.split_fraction);
  return {idx.begin() + n_train, idx.end()};
}

TrainedArtifact train(const Dataset& data, int model_id, const TrainConfig& config) {
  const int n_groups = static_cast<int>(data.groups.size());
  if (n_groups == 0) throw DataError("train: empty dataset");
  const std::size_t dim = data.groups.front().features.values.size();
  for (const DataGroup& g : data.groups)
    if (g.features.values.size() != dim)
      throw DataError("train: inconsistent feature dimensions");

  const long long n_classes = factorial(data.params.n_nets);
  const std::vector<int> idx = split_order(n_groups, config.seed);
  const int n_train = train_count(n_groups, config.split_fraction);

  // Standardizer from the training split only.
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (int t = 0; t < n_train; ++t) {
    const auto& v = data.groups[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])]
                        .features.values;
    for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
  }
  for (std::size_t i = 0; i < dim; ++i) mean[i] /= n_train;
  for (int t = 0; t < n_train; ++t) {
    const auto& v = data.groups[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])]
                        .features.values;
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = v[i] - mean[i];
      sd[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    sd[i] = std::sqrt(sd[i] / n_train);
    if (sd[i] == 0.0) sd[i] = 1.0; // constant feature: pass through centered
  }

  TrainedArtifact art;
  art.config = config;
  art.model = make_model(model_id, static_cast<int>(dim), config.hidden_units,
                         data.params.n_nets, data.params.feature_mode,
                         derive_seed(config.seed, 1));
  art.model.feat_mean = mean;
  art.model.feat_std = sd;

  // Pre-standardized inputs and one-hot targets.
  std::vector<std::vector<double>> inputs(static_cast<std::size_t>(n_groups));
  std::vector<std::vector<double>> targets(static_cast<std::size_t>(n_groups));
  for (int g = 0; g < n_groups; ++g) {
    inputs[static_cast<std::size_t>(g)] =
        standardize(art.model, data.groups[static_cast<std::size_t>(g)].features.values);
    targets[static_cast<std::size_t>(g)]
        .assign(static_cast<std::size_t>(n_classes), 0.0);
    targets[static_cast<std::size_t>(g)][static_cast<std::size_t>(
        data.groups[static_cast<std::size_t>(g)].optimal_index)] = 1.0;
  }

  AdamState adam = make_adam(art.model);
  std::vector<int> order(idx.begin(), idx.begin() + n_train);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    SplitMix64 rng(derive_seed(config.seed, 2 + static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (int start = 0; start < n_train; start += config.batch_size) {
      const int stop = std::min(start + config.batch_size, n_train);
      std::vector<const std::vector<double>*> xs, ts;
      for (int b = start; b < stop; ++b) {
        xs.push_back(&inputs[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])]);
        ts.push_back(&targets[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])]);
      }
      const double batch_loss =
          backward_and_step(art.model, xs, ts, adam, config.learning_rate);
      epoch_loss += batch_loss * static_cast<double>(stop - start);
    }
    art.loss_curve.push_back(epoch_loss / n_train);
  }

  std::vector<int> test(idx.begin() + n_train, idx.end());
  art.test_accuracy = test.empty() ? 0.0 : accuracy_on(art.model, data, test);
  return art;
}

NetOrdering predict_order(const MlpModel& m, const std::vector<double>& features) {
  const std::vector<double> probs =
      output_probabilities(m, standardize(m, features));
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) -
                               probs.begin());
  NetOrdering out;
  out.sequence = permutation_at(m.n_nets, static_cast<long long>(best));
  return out;
}

double accuracy_on(const MlpModel& m, const Dataset& data,
                   const std::vector<int>& group_indices) {
  if (group_indices.empty()) return 0.0;
  int matches = 0;
  for (int g : group_indices) {
    const DataGroup& group = data.groups[static_cast<std::size_t>(g)];
    const NetOrdering predicted = predict_order(m, group.features.values);
    if (permutation_index(predicted.sequence) == group.optimal_index) ++matches;
  }
  return 100.0 * matches / static_cast<double>(group_indices.size());
}

double accuracy(const MlpModel& m, const Dataset& data) {
  std::vector<int> all(static_cast<std::size_t>(data.groups.size()));
  std::iota(all.begin(), all.end(), 0);
  return accuracy_on(m, data, all);
}

std::vector<TrainConfig> grid_schedule(int budget, std::uint64_t base_seed,
                                       int batch_size, double split_fraction) {
  static const int kEpochs[] = {30, 50, 70, 90, 100, 150, 200, 500, 1000, 1500, 2000};
  static const int kUnits[] = {10, 20, 30, 40, 50, 60, 70, 80, 100};
  static const double kRates[] = {0.0001, 0.0005, 0.001, 0.002, 0.003,
                                  0.004,  0.005,  0.008, 0.01};
  static const int kDeskEpochs[] = {50, 100, 200};
  static const int kDeskUnits[] = {20, 40, 80};
  static const double kDeskRates[] = {0.001, 0.003, 0.005};

  std::vector<TrainConfig> schedule;
  auto push = [&](int e, int u, double lr) {
    for (const TrainConfig& c : schedule)
      if (c.epochs == e && c.hidden_units == u && c.learning_rate == lr) return;
    TrainConfig c;
    c.epochs = e;
    c.hidden_units = u;
    c.learning_rate = lr;
    c.batch_size = batch_size;
    c.split_fraction = split_fraction;
    c.seed = derive_seed(base_seed, schedule.size());
    schedule.push_back(c);
  };
  for (int e : kDeskEpochs)
    for (int u : kDeskUnits)
      for (double lr : kDeskRates) push(e, u, lr);
  for (int e : kEpochs)
    for (int u : kUnits)
      for (double lr : kRates) push(e, u, lr);

  if (budget < static_cast<int>(schedule.size()))
    schedule.resize(static_cast<std::size_t>(std::max(budget, 1)));
  return schedule;
}

GridSearchResult grid_search(const Dataset& data, int model_id, int budget,
                             std::uint64_t base_seed, int batch_size,
                             double split_fraction) {
  GridSearchResult result;
  const std::vector<TrainConfig> schedule =
      grid_schedule(budget, base_seed, batch_size, split_fraction);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    TrainedArtifact art = train(data, model_id, schedule[i]);
    result.points.push_back({schedule[i], art.test_accuracy});
    if (result.best_index < 0 || art.test_accuracy > result.best.test_accuracy) {
      result.best = std::move(art);
      result.best_index = static_cast<int>(i);
    }
  }
  return result;
}

} // namespace gridroute
