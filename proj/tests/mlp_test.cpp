#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "gridroute/errors.hpp"
#include "gridroute/mlp.hpp"
#include "gridroute/ordering.hpp"
#include "gridroute/rng.hpp"
#include "gridroute/train.hpp"

using namespace gridroute;

namespace {

MlpModel zero_weight_model(int model_id, int in, int hidden, int n_nets) {
  MlpModel m = make_model(model_id, in, hidden, n_nets, FeatureMode::Full, 1);
  for (auto& w : m.weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : m.biases) std::fill(b.begin(), b.end(), 0.0);
  return m;
}

// Arbitrary-architecture model for gradient checks.
MlpModel custom_model(SplitMix64& rng, Activation a1, Activation a3, LossKind loss) {
  MlpModel m;
  m.layer_dims = {5, 7, 6, 5};
  m.activations = {a1, Activation::Identity, a3};
  m.loss = loss;
  for (int l = 0; l < 3; ++l) {
    const std::size_t in = static_cast<std::size_t>(m.layer_dims[static_cast<std::size_t>(l)]);
    const std::size_t out =
        static_cast<std::size_t>(m.layer_dims[static_cast<std::size_t>(l + 1)]);
    std::vector<double> w(in * out);
    for (double& v : w) v = 1.6 * rng.unit() - 0.8;
    m.weights.push_back(std::move(w));
    std::vector<double> b(out);
    for (double& v : b) v = rng.unit() - 0.5;
    m.biases.push_back(std::move(b));
  }
  m.feat_mean.assign(5, 0.0);
  m.feat_std.assign(5, 1.0);
  m.n_nets = 0;
  return m;
}

// Largest relative gradient mismatch against central finite differences.
double max_gradient_error(MlpModel& m, const std::vector<double>& x,
                          const std::vector<double>& target) {
  Gradients grads;
  batch_gradients(m, {&x}, {&target}, grads);

  const double h = 1e-5;
  double worst = 0.0;
  auto check_param = [&](double& p, double analytic) {
    const double orig = p;
    p = orig + h;
    const double up = sample_loss(m, x, target);
    p = orig - h;
    const double down = sample_loss(m, x, target);
    p = orig;
    const double fd = (up - down) / (2.0 * h);
    const double err =
        std::abs(analytic - fd) / std::max({1.0, std::abs(analytic), std::abs(fd)});
    worst = std::max(worst, err);
  };
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    for (std::size_t i = 0; i < m.weights[l].size(); ++i)
      check_param(m.weights[l][i], grads.weights[l][i]);
    for (std::size_t i = 0; i < m.biases[l].size(); ++i)
      check_param(m.biases[l][i], grads.biases[l][i]);
  }
  return worst;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("model table: activations and losses per model id") {
  const MlpModel m1 = make_model(1, 16, 20, 3, FeatureMode::Full, 7);
  CHECK(m1.activations ==
        std::vector<Activation>{Activation::Tanh, Activation::Identity,
                                Activation::Softmax});
  CHECK(m1.loss == LossKind::Mse);

  const MlpModel m2 = make_model(2, 16, 20, 3, FeatureMode::Full, 7);
  CHECK(m2.activations[0] == Activation::Relu);
  CHECK(m2.loss == LossKind::Mse);

  const MlpModel m3 = make_model(3, 16, 20, 3, FeatureMode::Full, 7);
  CHECK(m3.activations ==
        std::vector<Activation>{Activation::Tanh, Activation::Identity,
                                Activation::Tanh});
  CHECK(m3.loss == LossKind::Ce);

  CHECK(m1.output_dim() == 6);
  CHECK(make_model(1, 24, 20, 5, FeatureMode::Full, 7).output_dim() == 120);
}

TEST_CASE("forward with zero weights") {
  const MlpModel softmax_head = zero_weight_model(1, 4, 8, 3);
  const std::vector<double> out = forward(softmax_head, {1, 2, 3, 4});
  REQUIRE(out.size() == 6);
  for (double v : out) CHECK(v == doctest::Approx(1.0 / 6.0));

  const MlpModel tanh_head = zero_weight_model(3, 4, 8, 3);
  for (double v : forward(tanh_head, {1, 2, 3, 4})) CHECK(v == 0.0);
}

TEST_CASE("softmax outputs are a probability vector") {
  SplitMix64 rng(3);
  const MlpModel m = make_model(2, 6, 10, 3, FeatureMode::Full, 17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(6);
    for (double& v : x) v = 4.0 * rng.unit() - 2.0;
    const std::vector<double> out = forward(m, x);
    double sum = 0.0;
    for (double v : out) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("model 3 probabilities normalize too") {
  SplitMix64 rng(4);
  const MlpModel m = make_model(3, 6, 10, 3, FeatureMode::Full, 23);
  std::vector<double> x(6);
  for (double& v : x) v = 2.0 * rng.unit() - 1.0;
  const std::vector<double> probs = output_probabilities(m, x);
  double sum = 0.0;
  for (double v : probs) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("forward rejects dimension mismatch") {
  const MlpModel m = make_model(1, 4, 8, 3, FeatureMode::Full, 1);
  CHECK_THROWS_AS(forward(m, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("loss_mse examples") {
  CHECK(loss_mse({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(loss_mse({1, 0}, {0, 1}) == 1.0);
  CHECK(loss_mse({1, 0, 0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(2.0 / 9.0));
  CHECK_THROWS_AS(loss_mse({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("loss_ce examples") {
  const std::vector<double> onehot{0, 0, 1, 0, 0, 0};
  const std::vector<double> uniform(6, 1.0 / 6.0);
  CHECK(loss_ce(onehot, uniform) == doctest::Approx(std::log(6.0)));
  std::vector<double> exact(6, 1e-12);
  exact[2] = 1.0;
  CHECK(loss_ce(onehot, exact) == doctest::Approx(0.0));
  std::vector<double> wrong(6, 0.2);
  wrong[2] = 1e-12;
  CHECK(loss_ce(onehot, wrong) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("analytic gradients match finite differences for every combo") {
  SplitMix64 rng(31337);
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
  for (Activation a1 : firsts) {
    for (const Head& head : heads) {
      MlpModel m = custom_model(rng, a1, head.act, head.loss);
      std::vector<double> x(5);
      for (double& v : x) v = 3.0 * rng.unit() - 1.5;
      std::vector<double> target(5, 0.0);
      if (head.loss == LossKind::Ce) {
        target[rng.below(5)] = 1.0;
      } else {
        for (double& v : target) v = rng.unit();
      }
      CHECK(max_gradient_error(m, x, target) <= 1e-5);
    }
  }
}

TEST_CASE("one Adam step descends a 1-parameter quadratic") {
  // f(w) = w^2 realized as an identity network with input 1 and target 0
  MlpModel m;
  m.layer_dims = {1, 1};
  m.activations = {Activation::Identity};
  m.loss = LossKind::Mse;
  m.weights = {{3.0}};
  m.biases = {{0.0}};
  m.feat_mean = {0.0};
  m.feat_std = {1.0};

  const std::vector<double> x{1.0};
  const std::vector<double> target{0.0};
  const double before = sample_loss(m, x, target);
  AdamState adam = make_adam(m);
  backward_and_step(m, {&x}, {&target}, adam, 0.1);
  CHECK(sample_loss(m, x, target) < before);
}

TEST_CASE("non-finite gradients abort") {
  MlpModel m;
  m.layer_dims = {1, 1};
  m.activations = {Activation::Identity};
  m.loss = LossKind::Mse;
  m.weights = {{std::numeric_limits<double>::infinity()}};
  m.biases = {{0.0}};
  m.feat_mean = {0.0};
  m.feat_std = {1.0};
  const std::vector<double> x{1.0};
  const std::vector<double> target{0.0};
  AdamState adam = make_adam(m);
  CHECK_THROWS_AS(backward_and_step(m, {&x}, {&target}, adam, 0.1),
                  std::runtime_error);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    MlpModel m = make_model(1 + static_cast<int>(rng.below(3)), 12,
                            5 + static_cast<int>(rng.below(20)), 3,
                            trial % 2 ? FeatureMode::Full : FeatureMode::Reduced,
                            rng.next());
    for (std::size_t i = 0; i < m.feat_mean.size(); ++i) {
      m.feat_mean[i] = 10.0 * rng.unit() - 5.0;
      m.feat_std[i] = rng.unit() + 0.5;
    }
    const std::string text = checkpoint_to_json(m);
    const MlpModel back = checkpoint_from_json(text);
    CHECK(back == m);
    CHECK(checkpoint_to_json(back) == text);
  }
}

TEST_CASE("checkpoint files round-trip") {
  const MlpModel m = make_model(2, 16, 30, 3, FeatureMode::Full, 99);
  TempFile file("gridroute_ckpt_test.json");
  save_checkpoint(m, file.path);
  CHECK(load_checkpoint(file.path) == m);
}

TEST_CASE("checkpoint loader rejects bad content") {
  const MlpModel m = make_model(1, 8, 10, 3, FeatureMode::Full, 5);
  std::string text = checkpoint_to_json(m);

  SUBCASE("unknown field") {
    std::string broken = text;
    broken.insert(broken.find('{') + 1, "\"bogus\":true,");
    CHECK_THROWS_AS(checkpoint_from_json(broken), DataError);
  }
  SUBCASE("shape mismatch") {
    std::string broken = text;
    const std::size_t pos = broken.find("\"layer_dims\":[8,10,10,6]");
    REQUIRE(pos != std::string::npos);
    broken.replace(pos, 24, "\"layer_dims\":[8,10,11,6]");
    CHECK_THROWS_AS(checkpoint_from_json(broken), DataError);
  }
  SUBCASE("not json") {
    CHECK_THROWS_AS(checkpoint_from_json("]"), DataError);
  }
}

TEST_CASE("predict_order decodes the argmax class") {
  // zero weights: uniform output, first index wins
  const MlpModel uniform = zero_weight_model(1, 4, 8, 3);
  CHECK(predict_order(uniform, {0, 0, 0, 0}).sequence == permutation_at(3, 0));

  // bias pushes class 3: the 4th permutation in canonical order
  MlpModel biased = zero_weight_model(1, 4, 8, 3);
  biased.biases.back()[3] = 10.0;
  CHECK(predict_order(biased, {0, 0, 0, 0}).sequence == permutation_at(3, 3));
  CHECK(predict_order(biased, {0, 0, 0, 0}).sequence == std::vector<int>{1, 2, 0});
}
