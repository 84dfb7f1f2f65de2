#include "genreforge/logreg.hpp"

#include <algorithm>
#include <cmath>

#include "genreforge/errors.hpp"

namespace genreforge {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logreg_loss(const Matrix& features, std::span<const double> targets,
                   std::span<const double> weights, double bias) {
  const std::size_t n = features.rows();
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = features.row(r);
    double z = bias;
    for (std::size_t c = 0; c < row.size(); ++c) z += weights[c] * row[c];
    // Stable binary cross-entropy with logits:
    // max(z,0) - z*y + log(1 + exp(-|z|)).
    loss += std::max(z, 0.0) - z * targets[r] + std::log1p(std::exp(-std::abs(z)));
  }
  return loss / static_cast<double>(n);
}

void logreg_gradient(const Matrix& features, std::span<const double> targets,
                     std::span<const double> weights, double bias,
                     std::span<double> grad_weights, double& grad_bias) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = features.row(r);
    double z = bias;
    for (std::size_t c = 0; c < d; ++c) z += weights[c] * row[c];
    const double residual = sigmoid(z) - targets[r];
    for (std::size_t c = 0; c < d; ++c) grad_weights[c] += residual * row[c];
    grad_bias += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < d; ++c) grad_weights[c] *= inv_n;
  grad_bias *= inv_n;
}

LogRegModel logreg_fit(const Dataset& train, const LogRegConfig& config) {
  const std::size_t n = train.n_samples();
  const std::size_t d = train.n_features();
  std::size_t n_classes = train.label_names.size();
  if (n_classes == 0 && n > 0) {
    n_classes = static_cast<std::size_t>(
        *std::max_element(train.labels.begin(), train.labels.end()) + 1);
  }
  std::vector<bool> present(n_classes, false);
  for (int label : train.labels) present[static_cast<std::size_t>(label)] = true;
  if (static_cast<std::size_t>(std::count(present.begin(), present.end(), true)) < 2) {
    throw Error(errc::single_class, "need at least 2 classes to fit");
  }

  LogRegModel model;
  model.config = config;
  model.weights = Matrix(n_classes, d);  // zero-initialized
  model.biases.assign(n_classes, 0.0);
  model.loss_curves.assign(n_classes, {});

  std::vector<double> targets(n);
  std::vector<double> grad(d);
  for (std::size_t cls = 0; cls < n_classes; ++cls) {
    for (std::size_t r = 0; r < n; ++r) {
      targets[r] = train.labels[r] == static_cast<int>(cls) ? 1.0 : 0.0;
    }
    auto w = model.weights.row(cls);
    double& b = model.biases[cls];
    auto& curve = model.loss_curves[cls];
    curve.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      double grad_bias = 0.0;
      logreg_gradient(train.features, targets, w, b, grad, grad_bias);
      for (std::size_t c = 0; c < d; ++c) {
        w[c] -= config.learning_rate * grad[c];
      }
      b -= config.learning_rate * grad_bias;
      curve.push_back(logreg_loss(train.features, targets, w, b));
    }
  }
  return model;
}

LogRegPrediction logreg_predict(const LogRegModel& model,
                                std::span<const double> query) {
  if (query.size() != model.weights.cols()) {
    throw Error(errc::dimension_mismatch,
                "query width != model width");
  }
  LogRegPrediction pred;
  pred.scores.resize(model.weights.rows());
  for (std::size_t cls = 0; cls < model.weights.rows(); ++cls) {
    const auto w = model.weights.row(cls);
    double z = model.biases[cls];
    for (std::size_t c = 0; c < query.size(); ++c) z += w[c] * query[c];
    pred.scores[cls] = sigmoid(z);
  }
  pred.class_index = 0;
  for (std::size_t cls = 1; cls < pred.scores.size(); ++cls) {
    if (pred.scores[cls] > pred.scores[static_cast<std::size_t>(pred.class_index)]) {
      pred.class_index = static_cast<int>(cls);
    }
  }
  return pred;
}

}  // namespace genreforge
