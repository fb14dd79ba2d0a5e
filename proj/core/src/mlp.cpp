#include "gridroute/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "gridroute/errors.hpp"
#include "gridroute/rng.hpp"

namespace gridroute {

namespace {

using json = nlohmann::json;

constexpr double kProbFloor = 1e-12;

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Identity: return "identity";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

Activation activation_from_name(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  if (s == "identity") return Activation::Identity;
  if (s == "softmax") return Activation::Softmax;
  throw DataError("checkpoint: unknown activation '" + s + "'");
}

std::vector<double> apply_activation(Activation a, const std::vector<double>& z) {
  std::vector<double> out(z.size());
  switch (a) {
    case Activation::Tanh:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::tanh(z[i]);
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > 0.0 ? z[i] : 0.0;
      break;
    case Activation::Identity:
      out = z;
      break;
    case Activation::Softmax: {
      double zmax = z[0];
      for (double v : z) zmax = std::max(zmax, v);
      double sum = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - zmax);
        sum += out[i];
      }
      for (double& v : out) v /= sum;
      break;
    }
  }
  return out;
}

// dL/dz given dL/da and the layer's post-activation values.
std::vector<double> activation_backward(Activation a,
                                        const std::vector<double>& post,
                                        const std::vector<double>& dpost) {
  std::vector<double> dz(post.size());
  switch (a) {
    case Activation::Tanh:
      for (std::size_t i = 0; i < post.size(); ++i)
        dz[i] = dpost[i] * (1.0 - post[i] * post[i]);
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < post.size(); ++i)
        dz[i] = post[i] > 0.0 ? dpost[i] : 0.0;
      break;
    case Activation::Identity:
      dz = dpost;
      break;
    case Activation::Softmax: {
      double dot = 0.0;
      for (std::size_t i = 0; i < post.size(); ++i) dot += dpost[i] * post[i];
      for (std::size_t i = 0; i < post.size(); ++i)
        dz[i] = post[i] * (dpost[i] - dot);
      break;
    }
  }
  return dz;
}

// Tanh head to class probabilities: q = u / sum(u), u = (1 + y) / 2.
std::vector<double> tanh_to_probabilities(const std::vector<double>& y) {
  std::vector<double> q(y.size());
  double z = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    q[i] = 0.5 * (1.0 + y[i]);
    z += q[i];
  }
  for (double& v : q) v /= z;
  return q;
}

struct ForwardTrace {
  std::vector<std::vector<double>> post; // post[0] = input, then per layer
};

std::vector<double> run_forward(const MlpModel& m, const std::vector<double>& x,
                                ForwardTrace* trace) {
  if (static_cast<int>(x.size()) != m.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  std::vector<double> a = x;
  if (trace) trace->post.push_back(a);
  for (int l = 0; l < m.layer_count(); ++l) {
    const int in = m.layer_dims[static_cast<std::size_t>(l)];
    const int out = m.layer_dims[static_cast<std::size_t>(l + 1)];
    std::vector<double> z(static_cast<std::size_t>(out));
    const std::vector<double>& w = m.weights[static_cast<std::size_t>(l)];
    const std::vector<double>& b = m.biases[static_cast<std::size_t>(l)];
    for (int o = 0; o < out; ++o) {
      double acc = b[static_cast<std::size_t>(o)];
      const double* row = w.data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = acc;
    }
    a = apply_activation(m.activations[static_cast<std::size_t>(l)], z);
    if (trace) trace->post.push_back(a);
  }
  return a;
}

// Loss and dL/d(head output) for one sample.
double loss_and_head_gradient(const MlpModel& m, const std::vector<double>& head,
                              const std::vector<double>& target,
                              std::vector<double>& dhead) {
  const std::size_t n = head.size();
  dhead.assign(n, 0.0);
  if (m.loss == LossKind::Mse) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = head[i] - target[i];
      loss += diff * diff;
      dhead[i] = 2.0 * diff / static_cast<double>(n);
    }
    return loss / static_cast<double>(n);
  }

  // Cross-entropy. Softmax heads emit probabilities directly; tanh (and any
  // other) heads are mapped through normalize((1+y)/2) first.
  if (m.activations.back() == Activation::Softmax) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (target[i] == 0.0) continue;
      const double q = std::max(head[i], kProbFloor);
      loss -= target[i] * std::log(q);
      if (head[i] > kProbFloor) dhead[i] = -target[i] / head[i];
    }
    return loss;
  }

  std::vector<double> u(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = 0.5 * (1.0 + head[i]);
    z += u[i];
  }
  double loss = 0.0;
  std::vector<double> dq(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i] == 0.0) continue;
    const double q = u[i] / z;
    loss -= target[i] * std::log(std::max(q, kProbFloor));
    if (q > kProbFloor) dq[i] = -target[i] / q;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += dq[i] * u[i];
  for (std::size_t i = 0; i < n; ++i)
    dhead[i] = 0.5 * (dq[i] / z - dot / (z * z));
  return loss;
}

} // namespace

MlpModel make_model(int model_id, int input_dim, int hidden_units, int n_nets,
                    FeatureMode mode, std::uint64_t seed) {
  if (model_id < 1 || model_id > 3)
    throw std::invalid_argument("make_model: model_id must be 1, 2 or 3");
  long long p = 1;
  for (int i = 2; i <= n_nets; ++i) p *= i;

  MlpModel m;
  m.model_id = model_id;
  m.n_nets = n_nets;
  m.feature_mode = mode;
  m.layer_dims = {input_dim, hidden_units, hidden_units, static_cast<int>(p)};
  switch (model_id) {
    case 1:
      m.activations = {Activation::Tanh, Activation::Identity, Activation::Softmax};
      m.loss = LossKind::Mse;
      break;
    case 2:
      m.activations = {Activation::Relu, Activation::Identity, Activation::Softmax};
      m.loss = LossKind::Mse;
      break;
    default:
      m.activations = {Activation::Tanh, Activation::Identity, Activation::Tanh};
      m.loss = LossKind::Ce;
      break;
  }

  SplitMix64 rng(seed);
  for (int l = 0; l < 3; ++l) {
    const int in = m.layer_dims[static_cast<std::size_t>(l)];
    const int out = m.layer_dims[static_cast<std::size_t>(l + 1)];
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::vector<double> w(static_cast<std::size_t>(in) * static_cast<std::size_t>(out));
    for (double& v : w) v = (2.0 * rng.unit() - 1.0) * bound;
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(static_cast<std::size_t>(out), 0.0);
  }
  m.feat_mean.assign(static_cast<std::size_t>(input_dim), 0.0);
  m.feat_std.assign(static_cast<std::size_t>(input_dim), 1.0);
  return m;
}

std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
  return run_forward(m, x, nullptr);
}

std::vector<double> output_probabilities(const MlpModel& m,
                                         const std::vector<double>& x) {
  std::vector<double> head = forward(m, x);
  if (m.activations.back() == Activation::Softmax) return head;
  return tanh_to_probabilities(head);
}

std::vector<double> standardize(const MlpModel& m, const std::vector<double>& x) {
  if (x.size() != m.feat_mean.size())
    throw std::invalid_argument("standardize: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = (x[i] - m.feat_mean[i]) / m.feat_std[i];
  return out;
}

double loss_mse(const std::vector<double>& target, const std::vector<double>& pred) {
  if (target.size() != pred.size())
    throw std::invalid_argument("loss_mse: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(target.size());
}

double loss_ce(const std::vector<double>& target_onehot,
               const std::vector<double>& pred_prob) {
  if (target_onehot.size() != pred_prob.size())
    throw std::invalid_argument("loss_ce: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < target_onehot.size(); ++i) {
    if (target_onehot[i] == 0.0) continue;
    acc -= target_onehot[i] * std::log(std::max(pred_prob[i], kProbFloor));
  }
  return acc;
}

double sample_loss(const MlpModel& m, const std::vector<double>& x,
                   const std::vector<double>& target) {
  const std::vector<double> head = forward(m, x);
  std::vector<double> scratch;
  return loss_and_head_gradient(m, head, target, scratch);
}

double batch_gradients(const MlpModel& m,
                       const std::vector<const std::vector<double>*>& xs,
                       const std::vector<const std::vector<double>*>& targets,
                       Gradients& grads) {
  if (xs.empty() || xs.size() != targets.size())
    throw std::invalid_argument("batch_gradients: bad batch");

  grads.weights.clear();
  grads.biases.clear();
  for (int l = 0; l < m.layer_count(); ++l) {
    grads.weights.emplace_back(m.weights[static_cast<std::size_t>(l)].size(), 0.0);
    grads.biases.emplace_back(m.biases[static_cast<std::size_t>(l)].size(), 0.0);
  }

  double total_loss = 0.0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    ForwardTrace trace;
    const std::vector<double> head = run_forward(m, *xs[s], &trace);
    std::vector<double> dpost;
    total_loss += loss_and_head_gradient(m, head, *targets[s], dpost);

    for (int l = m.layer_count() - 1; l >= 0; --l) {
      const int in = m.layer_dims[static_cast<std::size_t>(l)];
      const int out = m.layer_dims[static_cast<std::size_t>(l + 1)];
      const std::vector<double>& a_in = trace.post[static_cast<std::size_t>(l)];
      const std::vector<double>& a_out = trace.post[static_cast<std::size_t>(l + 1)];
      const std::vector<double> dz = activation_backward(
          m.activations[static_cast<std::size_t>(l)], a_out, dpost);

      std::vector<double>& gw = grads.weights[static_cast<std::size_t>(l)];
      std::vector<double>& gb = grads.biases[static_cast<std::size_t>(l)];
      std::vector<double> dprev(static_cast<std::size_t>(in), 0.0);
      const std::vector<double>& w = m.weights[static_cast<std::size_t>(l)];
      for (int o = 0; o < out; ++o) {
        const double g = dz[static_cast<std::size_t>(o)];
        gb[static_cast<std::size_t>(o)] += g;
        double* grow = gw.data() + static_cast<std::size_t>(o) * in;
        const double* wrow = w.data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          grow[i] += g * a_in[static_cast<std::size_t>(i)];
          dprev[static_cast<std::size_t>(i)] += g * wrow[i];
        }
      }
      dpost = std::move(dprev);
    }
  }

  const double inv = 1.0 / static_cast<double>(xs.size());
  for (auto& g : grads.weights)
    for (double& v : g) v *= inv;
  for (auto& g : grads.biases)
    for (double& v : g) v *= inv;
  return total_loss * inv;
}

AdamState make_adam(const MlpModel& m) {
  AdamState a;
  for (int l = 0; l < m.layer_count(); ++l) {
    a.m_w.emplace_back(m.weights[static_cast<std::size_t>(l)].size(), 0.0);
    a.v_w.emplace_back(m.weights[static_cast<std::size_t>(l)].size(), 0.0);
    a.m_b.emplace_back(m.biases[static_cast<std::size_t>(l)].size(), 0.0);
    a.v_b.emplace_back(m.biases[static_cast<std::size_t>(l)].size(), 0.0);
  }
  return a;
}

double backward_and_step(MlpModel& m,
                         const std::vector<const std::vector<double>*>& xs,
                         const std::vector<const std::vector<double>*>& targets,
                         AdamState& adam, double learning_rate) {
  Gradients grads;
  const double loss = batch_gradients(m, xs, targets, grads);

  for (const auto& g : grads.weights)
    for (double v : g)
      if (!std::isfinite(v))
        throw std::runtime_error("backward_and_step: non-finite weight gradient");
  for (const auto& g : grads.biases)
    for (double v : g)
      if (!std::isfinite(v))
        throw std::runtime_error("backward_and_step: non-finite bias gradient");

  ++adam.step;
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
  auto update = [&](std::vector<double>& param, std::vector<double>& mom,
                    std::vector<double>& vel, const std::vector<double>& g) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      mom[i] = adam.beta1 * mom[i] + (1.0 - adam.beta1) * g[i];
      vel[i] = adam.beta2 * vel[i] + (1.0 - adam.beta2) * g[i] * g[i];
      const double mhat = mom[i] / c1;
      const double vhat = vel[i] / c2;
      param[i] -= learning_rate * mhat / (std::sqrt(vhat) + adam.epsilon);
    }
  };
  for (int l = 0; l < m.layer_count(); ++l) {
    update(m.weights[static_cast<std::size_t>(l)], adam.m_w[static_cast<std::size_t>(l)],
           adam.v_w[static_cast<std::size_t>(l)], grads.weights[static_cast<std::size_t>(l)]);
    update(m.biases[static_cast<std::size_t>(l)], adam.m_b[static_cast<std::size_t>(l)],
           adam.v_b[static_cast<std::size_t>(l)], grads.biases[static_cast<std::size_t>(l)]);
  }
  return loss;
}

std::string checkpoint_to_json(const MlpModel& m) {
  json acts = json::array();
  for (Activation a : m.activations) acts.push_back(activation_name(a));
  json j{{"format_version", 1},
         {"model_id", m.model_id},
         {"n_nets", m.n_nets},
         {"feature_mode", m.feature_mode == FeatureMode::Full ? "full" : "reduced"},
         {"layer_dims", m.layer_dims},
         {"activations", acts},
         {"loss", m.loss == LossKind::Mse ? "mse" : "ce"},
         {"weights", m.weights},
         {"biases", m.biases},
         {"standardizer", json{{"mean", m.feat_mean}, {"std", m.feat_std}}}};
  return j.dump();
}

MlpModel checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  const std::set<std::string> allowed{"format_version", "model_id", "n_nets",
                                      "feature_mode", "layer_dims", "activations",
                                      "loss", "weights", "biases", "standardizer"};
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw DataError("checkpoint: unknown field '" + key + "'");
  for (const std::string& key : allowed)
    if (!j.contains(key)) throw DataError("checkpoint: missing field '" + key + "'");
  if (j.at("format_version").get<int>() != 1)
    throw DataError("checkpoint: unsupported format version");

  MlpModel m;
  m.model_id = j.at("model_id").get<int>();
  m.n_nets = j.at("n_nets").get<int>();
  const std::string mode = j.at("feature_mode").get<std::string>();
  if (mode != "full" && mode != "reduced")
    throw DataError("checkpoint: bad feature_mode");
  m.feature_mode = mode == "full" ? FeatureMode::Full : FeatureMode::Reduced;
  m.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  for (const json& a : j.at("activations"))
    m.activations.push_back(activation_from_name(a.get<std::string>()));
  const std::string loss = j.at("loss").get<std::string>();
  if (loss != "mse" && loss != "ce") throw DataError("checkpoint: bad loss");
  m.loss = loss == "mse" ? LossKind::Mse : LossKind::Ce;
  m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  m.feat_mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  m.feat_std = j.at("standardizer").at("std").get<std::vector<double>>();

  if (m.layer_dims.size() != m.weights.size() + 1 ||
      m.weights.size() != m.biases.size() ||
      m.activations.size() != m.weights.size())
    throw DataError("checkpoint: layer structure mismatch");
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const std::size_t in = static_cast<std::size_t>(m.layer_dims[l]);
    const std::size_t out = static_cast<std::size_t>(m.layer_dims[l + 1]);
    if (m.weights[l].size() != in * out || m.biases[l].size() != out)
      throw DataError("checkpoint: weight matrix shape mismatch");
  }
  if (m.feat_mean.size() != static_cast<std::size_t>(m.input_dim()) ||
      m.feat_std.size() != static_cast<std::size_t>(m.input_dim()))
    throw DataError("checkpoint: standardizer dimension mismatch");
  return m;
}

void save_checkpoint(const MlpModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_checkpoint: cannot open " + path);
  const std::string text = checkpoint_to_json(m) + "\n";
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("save_checkpoint: write failed for " + path);
}

MlpModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_checkpoint: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

} // namespace gridroute
