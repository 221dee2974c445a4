// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/nn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cccp/rng.hpp"
#include "cccp/text.hpp"

namespace cccp::nn {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

void apply_activation(Activation activation, std::vector<double>& values) {
  switch (activation) {
    case Activation::identity:
      return;
    case Activation::relu:
      for (double& v : values) v = v > 0.0 ? v : 0.0;
      return;
    case Activation::sigmoid:
      for (double& v : values) v = sigmoid(v);
      return;
    case Activation::softmax: {
      double peak = *std::max_element(values.begin(), values.end());
      double sum = 0.0;
      for (double& v : values) {
        v = std::exp(v - peak);
        sum += v;
      }
      for (double& v : values) v /= sum;
      return;
    }
  }
}

void check_model(const ModelParams& params) {
  if (params.layers.empty())
    throw std::invalid_argument("model has no layers");
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Layer& layer = params.layers[l];
    if (layer.weights.size() != layer.in * layer.out ||
        layer.bias.size() != layer.out) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  ": weight/bias sizes disagree with dims");
    }
    if (l + 1 < params.layers.size()) {
      if (params.layers[l + 1].in != layer.out)
        throw std::invalid_argument("layer " + std::to_string(l + 1) +
                                    ": input dim mismatch");
      if (layer.activation == Activation::softmax)
        throw std::invalid_argument(
            "softmax is only valid as the final activation");
    }
  }
}

struct Trace {
  // activations[0] is the input; activations[l+1] the output of layer l.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre;  // pre-activation per layer
};

Trace forward_trace(const ModelParams& params, std::span<const double> input) {
  check_model(params);
  if (input.size() != params.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  for (double v : input) {
    if (!std::isfinite(v))
      throw std::invalid_argument("forward: non-finite input");
  }
  Trace trace;
  trace.activations.emplace_back(input.begin(), input.end());
  trace.pre.reserve(params.layers.size());
  for (const Layer& layer : params.layers) {
    const std::vector<double>& a = trace.activations.back();
    std::vector<double> z(layer.out);
    for (std::size_t r = 0; r < layer.out; ++r) {
      const double* w = layer.weights.data() + r * layer.in;
      double acc = layer.bias[r];
      for (std::size_t c = 0; c < layer.in; ++c) acc += w[c] * a[c];
      z[r] = acc;
    }
    trace.pre.push_back(z);
    apply_activation(layer.activation, z);
    trace.activations.push_back(std::move(z));
  }
  return trace;
}

void check_pairing(const ModelParams& params, Loss loss) {
  const Layer& head = params.layers.back();
  if (loss == Loss::bce) {
    if (head.activation != Activation::sigmoid || head.out != 1)
      throw std::invalid_argument(
          "bce requires a 1-unit sigmoid head");
  } else {
    if (head.activation != Activation::softmax)
      throw std::invalid_argument("cce requires a softmax head");
  }
}

void check_target(const ModelParams& params, const Sample& sample, Loss loss) {
  if (sample.y.size() != params.output_dim())
    throw std::invalid_argument("target dimension mismatch");
  if (loss == Loss::bce) {
    if (sample.y[0] != 0.0 && sample.y[0] != 1.0)
      throw std::invalid_argument("bce target must be 0 or 1");
  }
}

// Cross-entropy evaluated on the head pre-activations rather than the
// probabilities: softplus for the sigmoid head, log-sum-exp for softmax.
// Equivalent in exact arithmetic, but never forms log(0) or log(1 - p), so
// the loss stays accurate enough for central-difference gradient checks even
// at saturated heads.
double sample_loss(const Trace& trace, const std::vector<double>& target,
                   Loss loss) {
  const std::vector<double>& z = trace.pre.back();
  if (loss == Loss::bce) {
    // -[y ln p + (1-y) ln(1-p)] with p = sigmoid(z).
    const double softplus =
        std::max(z[0], 0.0) + std::log1p(std::exp(-std::fabs(z[0])));
    return softplus - target[0] * z[0];
  }
  // -sum_k y_k ln softmax(z)_k = logsumexp(z) - sum_k y_k z_k.
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - peak);
  double dot = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) dot += target[k] * z[k];
  return peak + std::log(sum) - dot;
}

struct Gradient {
  std::vector<std::vector<double>> weights;  // per layer, row-major
  std::vector<std::vector<double>> bias;

  explicit Gradient(const ModelParams& params) {
    weights.reserve(params.layers.size());
    bias.reserve(params.layers.size());
    for (const Layer& layer : params.layers) {
      weights.emplace_back(layer.weights.size(), 0.0);
      bias.emplace_back(layer.bias.size(), 0.0);
    }
  }

  void scale(double factor) {
    for (auto& w : weights)
      for (double& v : w) v *= factor;
    for (auto& b : bias)
      for (double& v : b) v *= factor;
  }
};

// Backpropagation for the two supported head/loss pairings, where the output
// delta collapses to (p - y) in both cases.
void accumulate_gradient(const ModelParams& params, const Sample& sample,
                         Loss loss, Gradient& grad) {
  Trace trace = forward_trace(params, sample.x);
  const std::size_t depth = params.layers.size();

  std::vector<double> delta = trace.activations.back();
  for (std::size_t k = 0; k < delta.size(); ++k) delta[k] -= sample.y[k];

  for (std::size_t l = depth; l-- > 0;) {
    const Layer& layer = params.layers[l];
    const std::vector<double>& a_prev = trace.activations[l];
    for (std::size_t r = 0; r < layer.out; ++r) {
      grad.bias[l][r] += delta[r];
      double* gw = grad.weights[l].data() + r * layer.in;
      for (std::size_t c = 0; c < layer.in; ++c) gw[c] += delta[r] * a_prev[c];
    }
    if (l == 0) break;

    const Layer& below = params.layers[l - 1];
    std::vector<double> next(layer.in, 0.0);
    for (std::size_t r = 0; r < layer.out; ++r) {
      const double* w = layer.weights.data() + r * layer.in;
      for (std::size_t c = 0; c < layer.in; ++c) next[c] += w[c] * delta[r];
    }
    // Multiply by the activation derivative of the layer below.
    switch (below.activation) {
      case Activation::identity:
        break;
      case Activation::relu:
        for (std::size_t c = 0; c < next.size(); ++c)
          if (trace.pre[l - 1][c] <= 0.0) next[c] = 0.0;
        break;
      case Activation::sigmoid:
        for (std::size_t c = 0; c < next.size(); ++c) {
          double a = trace.activations[l][c];
          next[c] *= a * (1.0 - a);
        }
        break;
      case Activation::softmax:
        throw std::invalid_argument(
            "softmax is only valid as the final activation");
    }
    delta = std::move(next);
  }
}

}  // namespace

const char* to_string(Activation activation) {
  switch (activation) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  return "unknown";
}

std::size_t ModelParams::parameter_count() const {
  std::size_t count = 0;
  for (const Layer& layer : layers)
    count += layer.weights.size() + layer.bias.size();
  return count;
}

ModelParams make_network(std::size_t input_dim,
                         const std::vector<std::size_t>& widths,
                         Activation hidden, Activation head,
                         std::uint64_t seed) {
  if (widths.empty()) throw std::invalid_argument("make_network: no layers");
  Rng rng(seed);
  ModelParams params;
  std::size_t in = input_dim;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    Layer layer;
    layer.in = in;
    layer.out = widths[l];
    layer.activation = l + 1 == widths.size() ? head : hidden;
    layer.weights.resize(layer.in * layer.out);
    layer.bias.resize(layer.out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (double& w : layer.weights) w = rng.next_symmetric(scale);
    // Biases share the weight range: zero biases would park relu units of
    // all-inactive layers exactly on the kink, which breaks finite-difference
    // gradient checks.
    for (double& b : layer.bias) b = rng.next_symmetric(scale);
    params.layers.push_back(std::move(layer));
    in = widths[l];
  }
  check_model(params);
  return params;
}

std::vector<double> forward(const ModelParams& params,
                            std::span<const double> input) {
  return forward_trace(params, input).activations.back();
}

double dataset_loss(const ModelParams& params,
                    const std::vector<Sample>& dataset, Loss loss) {
  if (dataset.empty()) throw std::invalid_argument("dataset_loss: empty");
  double total = 0.0;
  for (const Sample& sample : dataset) {
    check_target(params, sample, loss);
    total += sample_loss(forward_trace(params, sample.x), sample.y, loss);
  }
  return total / static_cast<double>(dataset.size());
}

ModelParams train(ModelParams params, const std::vector<Sample>& dataset,
                  Loss loss, const TrainConfig& config) {
  check_model(params);
  check_pairing(params, loss);
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (config.learning_rate <= 0.0)
    throw std::invalid_argument("train: learning_rate must be positive");
  if (config.batch_size < 1)
    throw std::invalid_argument("train: batch_size must be positive");
  for (const Sample& sample : dataset) check_target(params, sample, loss);

  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.data(), order.size());
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch =
          std::min<std::size_t>(config.batch_size, order.size() - cursor);
      Gradient grad(params);
      for (std::size_t b = 0; b < batch; ++b)
        accumulate_gradient(params, dataset[order[cursor + b]], loss, grad);
      grad.scale(1.0 / static_cast<double>(batch));
      for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Layer& layer = params.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
          layer.weights[i] -= config.learning_rate * grad.weights[l][i];
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
          layer.bias[i] -= config.learning_rate * grad.bias[l][i];
      }
      cursor += batch;
    }
  }
  return params;
}

double gradient_check(const ModelParams& params, const Sample& sample,
                      Loss loss) {
  check_model(params);
  check_pairing(params, loss);
  check_target(params, sample, loss);

  Gradient analytic(params);
  accumulate_gradient(params, sample, loss, analytic);

  ModelParams probe = params;
  const double step = 1e-5;
  double worst = 0.0;

  auto relative = [](double a, double n) {
    return std::fabs(a - n) / std::max(1.0, std::fabs(a) + std::fabs(n));
  };
  auto numeric = [&](double& slot) {
    const double saved = slot;
    slot = saved + step;
    double up = sample_loss(forward_trace(probe, sample.x), sample.y, loss);
    slot = saved - step;
    double down = sample_loss(forward_trace(probe, sample.x), sample.y, loss);
    slot = saved;
    return (up - down) / (2.0 * step);
  };

  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    Layer& layer = probe.layers[l];
    for (std::size_t i = 0; i < layer.weights.size(); ++i)
      worst = std::max(worst,
                       relative(analytic.weights[l][i], numeric(layer.weights[i])));
    for (std::size_t i = 0; i < layer.bias.size(); ++i)
      worst =
          std::max(worst, relative(analytic.bias[l][i], numeric(layer.bias[i])));
  }
  return worst;
}

void save(const ModelParams& params, std::ostream& out) {
  out << "cccp-nn 1\n";
  out << "layers " << params.layers.size() << '\n';
  for (const Layer& layer : params.layers) {
    out << "layer " << layer.out << ' ' << layer.in << ' '
        << to_string(layer.activation) << '\n';
    for (std::size_t r = 0; r < layer.out; ++r) {
      for (std::size_t c = 0; c < layer.in; ++c) {
        if (c) out << ' ';
        out << format_g17(layer.weights[r * layer.in + c]);
      }
      out << '\n';
    }
    for (std::size_t r = 0; r < layer.out; ++r) {
      if (r) out << ' ';
      out << format_g17(layer.bias[r]);
    }
    out << '\n';
  }
}

namespace {

Activation activation_from_string(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "softmax") return Activation::softmax;
  throw std::runtime_error("model file: unknown activation '" + name + "'");
}

}  // namespace

ModelParams load(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "cccp-nn" || version != 1)
    throw std::runtime_error("model file: bad header");
  std::string key;
  std::size_t n_layers = 0;
  in >> key >> n_layers;
  if (!in || key != "layers")
    throw std::runtime_error("model file: missing layer count");
  ModelParams params;
  for (std::size_t l = 0; l < n_layers; ++l) {
    std::string tag, activation;
    std::size_t out = 0, dim_in = 0;
    in >> tag >> out >> dim_in >> activation;
    if (!in || tag != "layer")
      throw std::runtime_error("model file: bad layer header");
    Layer layer;
    layer.out = out;
    layer.in = dim_in;
    layer.activation = activation_from_string(activation);
    layer.weights.resize(out * dim_in);
    layer.bias.resize(out);
    for (double& w : layer.weights) in >> w;
    for (double& b : layer.bias) in >> b;
    if (!in) throw std::runtime_error("model file: truncated parameters");
    params.layers.push_back(std::move(layer));
  }
  check_model(params);
  return params;
}

}  // namespace cccp::nn
