#include "genreforge/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "detail/rng.hpp"
#include "genreforge/errors.hpp"

namespace genreforge {

namespace {

void forward_layer(const DenseLayer& layer, std::span<const double> input,
                   std::vector<double>& pre_activation,
                   std::vector<double>& output) {
  const std::size_t n_out = layer.weights.rows();
  pre_activation.resize(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    const auto w = layer.weights.row(o);
    double z = layer.biases[o];
    for (std::size_t i = 0; i < input.size(); ++i) z += w[i] * input[i];
    pre_activation[o] = z;
  }
  if (layer.activation == Activation::ReLU) {
    output.resize(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      output[o] = pre_activation[o] > 0.0 ? pre_activation[o] : 0.0;
    }
  } else {
    output = softmax(pre_activation);
  }
}

std::vector<double> forward(const MlpModel& model,
                            std::span<const double> input) {
  std::vector<double> activation(input.begin(), input.end());
  std::vector<double> pre;
  std::vector<double> next;
  for (const auto& layer : model.layers) {
    forward_layer(layer, activation, pre, next);
    activation = next;
  }
  return activation;
}

// Per-sample activations and pre-activations for backprop.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // [n_layers + 1]
  std::vector<std::vector<double>> pre;          // [n_layers]
};

void forward_trace(const MlpModel& model, std::span<const double> input,
                   ForwardTrace& trace) {
  const std::size_t n_layers = model.layers.size();
  trace.activations.resize(n_layers + 1);
  trace.pre.resize(n_layers);
  trace.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < n_layers; ++l) {
    forward_layer(model.layers[l], trace.activations[l], trace.pre[l],
                  trace.activations[l + 1]);
  }
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  double max_logit = logits[0];
  for (double z : logits) max_logit = std::max(max_logit, z);
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

double mlp_loss(const MlpModel& model, const Matrix& features,
                std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto probs = forward(model, features.row(r));
    loss += -std::log(probs[static_cast<std::size_t>(labels[r])]);
  }
  return loss / static_cast<double>(features.rows());
}

MlpModel mlp_fit(const Dataset& train, const MlpConfig& config) {
  const std::size_t n = train.n_samples();
  const std::size_t d = train.n_features();
  if (n == 0) {
    throw Error(errc::empty_input, "cannot fit on zero rows");
  }
  std::size_t n_classes = train.label_names.size();
  if (n_classes == 0) {
    n_classes = static_cast<std::size_t>(
        *std::max_element(train.labels.begin(), train.labels.end()) + 1);
  }
  std::vector<bool> present(n_classes, false);
  for (int label : train.labels) present[static_cast<std::size_t>(label)] = true;
  if (static_cast<std::size_t>(std::count(present.begin(), present.end(), true)) < 2) {
    throw Error(errc::single_class, "need at least 2 classes to fit");
  }
  if (config.batch_size == 0) {
    throw std::invalid_argument("batch_size must be >= 1");
  }

  MlpModel model;
  model.config = config;

  // Glorot-uniform weights, zero biases.
  std::mt19937 rng(static_cast<std::mt19937::result_type>(config.seed));
  std::vector<std::size_t> widths = {d};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(n_classes);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    const std::size_t fan_in = widths[l];
    const std::size_t fan_out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    layer.weights = Matrix(fan_out, fan_in);
    for (std::size_t o = 0; o < fan_out; ++o) {
      for (std::size_t i = 0; i < fan_in; ++i) {
        layer.weights(o, i) = detail::rng_uniform(rng, -limit, limit);
      }
    }
    layer.biases.assign(fan_out, 0.0);
    layer.activation = l + 2 < widths.size() ? Activation::ReLU
                                             : Activation::Softmax;
    model.layers.push_back(std::move(layer));
  }

  const std::size_t n_layers = model.layers.size();
  std::vector<Matrix> grad_w(n_layers);
  std::vector<std::vector<double>> grad_b(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    grad_w[l] = Matrix(model.layers[l].weights.rows(),
                       model.layers[l].weights.cols());
    grad_b[l].assign(model.layers[l].biases.size(), 0.0);
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  ForwardTrace trace;
  std::vector<double> delta;
  std::vector<double> delta_prev;
  model.loss_curve.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    detail::rng_shuffle(rng, order);
    double epoch_loss = 0.0;

    for (std::size_t batch_start = 0; batch_start < n;
         batch_start += config.batch_size) {
      const std::size_t batch_end =
          std::min(batch_start + config.batch_size, n);
      const auto batch_n = static_cast<double>(batch_end - batch_start);

      for (std::size_t l = 0; l < n_layers; ++l) {
        std::fill_n(grad_w[l].data(),
                    grad_w[l].rows() * grad_w[l].cols(), 0.0);
        std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
      }

      double batch_loss = 0.0;
      for (std::size_t s = batch_start; s < batch_end; ++s) {
        const std::size_t row = order[s];
        forward_trace(model, train.features.row(row), trace);
        const auto& probs = trace.activations[n_layers];
        const auto truth = static_cast<std::size_t>(train.labels[row]);
        batch_loss += -std::log(probs[truth]);

        // Output delta: softmax + cross-entropy.
        delta.assign(probs.begin(), probs.end());
        delta[truth] -= 1.0;

        for (std::size_t l = n_layers; l-- > 0;) {
          const auto& input = trace.activations[l];
          for (std::size_t o = 0; o < delta.size(); ++o) {
            auto grad_row = grad_w[l].row(o);
            for (std::size_t i = 0; i < input.size(); ++i) {
              grad_row[i] += delta[o] * input[i];
            }
            grad_b[l][o] += delta[o];
          }
          if (l == 0) break;
          // delta_{l-1} = (W_l^T delta_l) * relu'(z_{l-1})
          delta_prev.assign(input.size(), 0.0);
          for (std::size_t o = 0; o < delta.size(); ++o) {
            const auto w = model.layers[l].weights.row(o);
            for (std::size_t i = 0; i < input.size(); ++i) {
              delta_prev[i] += w[i] * delta[o];
            }
          }
          for (std::size_t i = 0; i < input.size(); ++i) {
            if (trace.pre[l - 1][i] <= 0.0) delta_prev[i] = 0.0;
          }
          delta = delta_prev;
        }
      }

      if (!std::isfinite(batch_loss)) {
        throw Error(errc::non_finite_loss,
                    "training diverged at epoch " + std::to_string(epoch) +
                        "; lower the learning rate");
      }
      epoch_loss += batch_loss;

      const double step = config.learning_rate / batch_n;
      for (std::size_t l = 0; l < n_layers; ++l) {
        auto& layer = model.layers[l];
        double* w = layer.weights.data();
        const double* g = grad_w[l].data();
        const std::size_t count = layer.weights.rows() * layer.weights.cols();
        for (std::size_t i = 0; i < count; ++i) w[i] -= step * g[i];
        for (std::size_t o = 0; o < layer.biases.size(); ++o) {
          layer.biases[o] -= step * grad_b[l][o];
        }
      }
    }

    model.loss_curve.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

MlpPrediction mlp_predict(const MlpModel& model,
                          std::span<const double> query) {
  if (model.layers.empty() || query.size() != model.layers[0].weights.cols()) {
    throw Error(errc::dimension_mismatch, "query width != model width");
  }
  MlpPrediction pred;
  pred.probabilities = forward(model, query);
  pred.class_index = 0;
  for (std::size_t c = 1; c < pred.probabilities.size(); ++c) {
    if (pred.probabilities[c] >
        pred.probabilities[static_cast<std::size_t>(pred.class_index)]) {
      pred.class_index = static_cast<int>(c);
    }
  }
  return pred;
}

}  // namespace genreforge
