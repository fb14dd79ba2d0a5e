#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridroute/features.hpp"

namespace gridroute {

enum class Activation { Tanh, Relu, Identity, Softmax };
enum class LossKind { Mse, Ce };

// Dense network: per layer an affine map followed by an activation.
// Model 1: tanh / identity / softmax, MSE loss.
// Model 2: relu / identity / softmax, MSE loss.
// Model 3: tanh / identity / tanh, cross-entropy on normalized (1+y)/2.
// The output dimension is n_nets! (one class per candidate ordering).
struct MlpModel {
  std::vector<int> layer_dims;          // [input, hidden, hidden, output]
  std::vector<Activation> activations;  // one per layer
  std::vector<std::vector<double>> weights; // row-major, out x in per layer
  std::vector<std::vector<double>> biases;
  LossKind loss = LossKind::Mse;
  std::vector<double> feat_mean, feat_std; // feature standardizer
  int model_id = 1;
  int n_nets = 0;
  FeatureMode feature_mode = FeatureMode::Full;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Glorot-uniform initialized model for one of the three architectures.
MlpModel make_model(int model_id, int input_dim, int hidden_units, int n_nets,
                    FeatureMode mode, std::uint64_t seed);

/// Head output: post-activation of the last layer.
std::vector<double> forward(const MlpModel& m, const std::vector<double>& x);

/// Class probabilities: softmax heads pass through; tanh heads map through
/// normalize((1 + y) / 2).
std::vector<double> output_probabilities(const MlpModel& m,
                                         const std::vector<double>& x);

/// (x - mean) / std, componentwise.
std::vector<double> standardize(const MlpModel& m, const std::vector<double>& x);

double loss_mse(const std::vector<double>& target, const std::vector<double>& pred);
/// -sum p*log(max(q, 1e-12)) for one sample.
double loss_ce(const std::vector<double>& target_onehot,
               const std::vector<double>& pred_prob);

/// Loss of one sample under the model's own loss kind (model 3 maps tanh
/// output to probabilities before the cross-entropy).
double sample_loss(const MlpModel& m, const std::vector<double>& x,
                   const std::vector<double>& target);

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

/// Mean loss over the batch; grads receives the mean parameter gradient.
double batch_gradients(const MlpModel& m,
                       const std::vector<const std::vector<double>*>& xs,
                       const std::vector<const std::vector<double>*>& targets,
                       Gradients& grads);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step = 0;
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
};

AdamState make_adam(const MlpModel& m);

/// One optimization step on a batch. Throws std::runtime_error on non-finite
/// gradients. Returns the batch loss.
double backward_and_step(MlpModel& m,
                         const std::vector<const std::vector<double>*>& xs,
                         const std::vector<const std::vector<double>*>& targets,
                         AdamState& adam, double learning_rate);

// Checkpoint round-trip is bit-exact.
std::string checkpoint_to_json(const MlpModel& m);
MlpModel checkpoint_from_json(const std::string& text);
void save_checkpoint(const MlpModel& m, const std::string& path);
MlpModel load_checkpoint(const std::string& path);

} // namespace gridroute
