// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cccp::nn {

enum class Activation { identity, relu, sigmoid, softmax };

const char* to_string(Activation activation);

struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // row-major, out x in
  std::vector<double> bias;     // out
  Activation activation = Activation::identity;
};

// A plain feedforward stack. Softmax is only valid as the final activation.
struct ModelParams {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().in; }
  std::size_t output_dim() const { return layers.back().out; }
  std::size_t parameter_count() const;
  bool empty() const { return layers.empty(); }
};

// Seeded initialization, uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
// `widths` lists every layer output size including the final one.
ModelParams make_network(std::size_t input_dim,
                         const std::vector<std::size_t>& widths,
                         Activation hidden, Activation head,
                         std::uint64_t seed);

// Affine + activation composition. Throws std::invalid_argument on dimension
// mismatch or non-finite input.
std::vector<double> forward(const ModelParams& params,
                            std::span<const double> input);

enum class Loss { bce, cce };

struct Sample {
  std::vector<double> x;
  std::vector<double> y;  // size 1 with value in {0,1} for bce; one-hot for cce
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

// Plain minibatch SGD, single-threaded, deterministic given the seed (seeded
// shuffle, seeded initialization upstream). bce pairs with a 1-unit sigmoid
// head, cce with a softmax head.
ModelParams train(ModelParams params, const std::vector<Sample>& dataset,
                  Loss loss, const TrainConfig& config);

// Mean cross-entropy over the dataset, evaluated on the head pre-activations
// (softplus / log-sum-exp) so saturated heads stay finite and accurate.
double dataset_loss(const ModelParams& params,
                    const std::vector<Sample>& dataset, Loss loss);

// Maximum relative error between the analytic gradient and central finite
// differences (step 1e-5) over every weight and bias, where
// rel = |a - n| / max(1, |a| + |n|). A healthy implementation stays <= 1e-4.
double gradient_check(const ModelParams& params, const Sample& sample,
                      Loss loss);

// Flat text serialization: dims, activations, then row-major weights and
// biases at 17 significant digits. Round-trips value-exactly.
void save(const ModelParams& params, std::ostream& out);
ModelParams load(std::istream& in);

}  // namespace cccp::nn
