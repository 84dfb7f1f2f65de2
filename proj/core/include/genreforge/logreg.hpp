#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genreforge/preprocess.hpp"

namespace genreforge {

struct LogRegConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
};

// One-vs-rest logistic regression: one sigmoid classifier per class.
struct LogRegModel {
  LogRegConfig config;
  Matrix weights;                        // [n_classes x n_features]
  std::vector<double> biases;            // [n_classes]
  std::vector<std::vector<double>> loss_curves;  // per class, per epoch
};

struct LogRegPrediction {
  int class_index = 0;
  std::vector<double> scores;  // raw per-class sigmoid outputs
};

// Numerically stable 1/(1 + e^-z).
double sigmoid(double z);

// Full-batch gradient descent on mean binary cross-entropy, one binary
// problem per class, weights initialized to zero.
// Throws errc::single_class if fewer than 2 classes are present.
LogRegModel logreg_fit(const Dataset& train, const LogRegConfig& config);

// argmax over per-class sigmoid scores; ties resolve to the lower index.
LogRegPrediction logreg_predict(const LogRegModel& model,
                                std::span<const double> query);

// Mean binary cross-entropy of one binary subproblem and its analytic
// gradient. Exposed so the gradients can be checked against finite
// differences.
double logreg_loss(const Matrix& features, std::span<const double> targets,
                   std::span<const double> weights, double bias);
void logreg_gradient(const Matrix& features, std::span<const double> targets,
                     std::span<const double> weights, double bias,
                     std::span<double> grad_weights, double& grad_bias);

}  // namespace genreforge
