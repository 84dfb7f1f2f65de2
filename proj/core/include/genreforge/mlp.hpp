#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genreforge/preprocess.hpp"

namespace genreforge {

enum class Activation { ReLU, Softmax };

struct DenseLayer {
  Matrix weights;  // [n_out x n_in]
  std::vector<double> biases;
  Activation activation = Activation::ReLU;
};

struct MlpConfig {
  std::vector<std::size_t> hidden = {256, 128, 64};
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 42;
};

// Feedforward net: ReLU hidden layers, softmax output.
struct MlpModel {
  MlpConfig config;
  std::vector<DenseLayer> layers;
  std::vector<double> loss_curve;  // mean training cross-entropy per epoch
};

struct MlpPrediction {
  int class_index = 0;
  std::vector<double> probabilities;  // softmax output, sums to 1
};

// Mini-batch gradient descent on mean categorical cross-entropy with a
// seeded shuffle per epoch. Weights start Glorot-uniform, biases zero.
// Throws errc::single_class, and errc::non_finite_loss when training
// diverges (learning rate too high).
MlpModel mlp_fit(const Dataset& train, const MlpConfig& config);

// Forward pass; argmax of the softmax output, ties to the lower index.
// Throws errc::dimension_mismatch.
MlpPrediction mlp_predict(const MlpModel& model, std::span<const double> query);

// Mean categorical cross-entropy of the current parameters on a batch.
// Exposed for gradient checking against finite differences.
double mlp_loss(const MlpModel& model, const Matrix& features,
                std::span<const int> labels);

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

}  // namespace genreforge
