#include "elmlc/elm.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "elmlc/error.hpp"
#include "elmlc/random.hpp"

namespace elmlc {

double activate(Activation kind, double z) noexcept {
  switch (kind) {
    case Activation::sigmoid:
      // exp(-z) overflows for z < -709; the limit is exactly representable.
      if (z < -700.0) return 0.0;
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::tanh:
      return std::tanh(z);
    case Activation::hardlimit:
      return z >= 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

std::string_view to_string(Activation kind) noexcept {
  switch (kind) {
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::tanh:
      return "tanh";
    case Activation::hardlimit:
      return "hardlimit";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "hardlimit") return Activation::hardlimit;
  throw ConfigError("unknown activation '" + std::string(name) +
                    "' (expected sigmoid, tanh or hardlimit)");
}

void ElmConfig::validate() const {
  if (hidden_nodes < 1) throw ConfigError("ElmConfig: hidden_nodes must be >= 1");
  if (!std::isfinite(weight_range.lo) || !std::isfinite(weight_range.hi) ||
      weight_range.lo > weight_range.hi) {
    throw ConfigError("ElmConfig: weight_range must be a finite interval with lo <= hi");
  }
  if (!(rank_tol >= 0.0) || !std::isfinite(rank_tol)) {
    throw ConfigError("ElmConfig: rank_tol must be finite and >= 0");
  }
}

RandomLayer init_random_layer(const ElmConfig& config, std::size_t feature_count) {
  config.validate();
  if (feature_count < 1) throw ConfigError("init_random_layer: feature_count must be >= 1");
  Rng rng(config.rng_seed);
  const auto [lo, hi] = config.weight_range;
  RandomLayer layer{Matrix(config.hidden_nodes, feature_count),
                    std::vector<double>(config.hidden_nodes)};
  for (double& w : layer.weights.data()) w = rng.uniform(lo, hi);
  for (double& c : layer.biases) c = rng.uniform(lo, hi);
  return layer;
}

Matrix build_hidden_matrix(const Matrix& weights, std::span<const double> biases,
                           const Matrix& x, Activation activation) {
  if (weights.empty() || x.empty()) throw DimensionError("build_hidden_matrix: empty input");
  if (weights.cols() != x.cols()) {
    throw DimensionError("build_hidden_matrix: weights expect " + std::to_string(weights.cols()) +
                         " features, input has " + std::to_string(x.cols()));
  }
  if (biases.size() != weights.rows()) {
    throw DimensionError("build_hidden_matrix: " + std::to_string(biases.size()) +
                         " biases for " + std::to_string(weights.rows()) + " hidden nodes");
  }
  Matrix a = matmul_transposed(x, weights);
  for (std::size_t j = 0; j < a.rows(); ++j) {
    auto row = a.row(j);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = activate(activation, row[i] + biases[i]);
  }
  return a;
}

Matrix encode_targets(std::span<const Label> labels, std::size_t class_count) {
  if (labels.empty()) throw DimensionError("encode_targets: no labels");
  if (class_count < 1) throw ConfigError("encode_targets: class_count must be >= 1");
  Matrix y(labels.size(), class_count);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] >= class_count) {
      throw ConfigError("encode_targets: label " + std::to_string(labels[j]) + " at sample " +
                        std::to_string(j) + " is outside [0, " + std::to_string(class_count) +
                        ")");
    }
    y(j, labels[j]) = 1.0;
  }
  return y;
}

double training_cost(const Matrix& hidden, const Matrix& output_weights, const Matrix& targets) {
  const Matrix out = matmul(hidden, output_weights);
  if (out.rows() != targets.rows() || out.cols() != targets.cols()) {
    throw DimensionError("training_cost: outputs are " + std::to_string(out.rows()) + "x" +
                         std::to_string(out.cols()) + ", targets are " +
                         std::to_string(targets.rows()) + "x" + std::to_string(targets.cols()));
  }
  double cost = 0.0;
  for (std::size_t j = 0; j < out.rows(); ++j) {
    const auto o = out.row(j);
    const auto y = targets.row(j);
    for (std::size_t k = 0; k < o.size(); ++k) cost += (o[k] - y[k]) * (o[k] - y[k]);
  }
  return cost;
}

ElmModel::ElmModel(ElmConfig config, RandomLayer layer, Matrix output_weights,
                   ScalingParams scaling)
    : config_(config),
      layer_(std::move(layer)),
      output_weights_(std::move(output_weights)),
      scaling_(std::move(scaling)) {
  config_.validate();
  if (layer_.weights.empty() || output_weights_.empty()) {
    throw DimensionError("ElmModel: empty weight matrix");
  }
  if (layer_.weights.rows() != config_.hidden_nodes ||
      layer_.biases.size() != config_.hidden_nodes ||
      output_weights_.rows() != config_.hidden_nodes) {
    throw DimensionError("ElmModel: weight shapes disagree with hidden_nodes = " +
                         std::to_string(config_.hidden_nodes));
  }
  if (scaling_.feature_count() != layer_.weights.cols() ||
      scaling_.max.size() != scaling_.min.size()) {
    throw DimensionError("ElmModel: scaling covers " + std::to_string(scaling_.feature_count()) +
                         " features, weights expect " + std::to_string(layer_.weights.cols()));
  }
}

Matrix ElmModel::hidden(const Matrix& x) const {
  if (x.cols() != feature_count()) {
    throw DimensionError("ElmModel: model expects " + std::to_string(feature_count()) +
                         " features, input has " + std::to_string(x.cols()));
  }
  return build_hidden_matrix(layer_.weights, layer_.biases, apply_scaling(x, scaling_),
                             config_.activation);
}

Matrix ElmModel::scores(const Matrix& x) const { return matmul(hidden(x), output_weights_); }

ElmModel train_elm(const Matrix& x, std::span<const Label> labels, std::size_t class_count,
                   const ElmConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (x.empty()) throw DimensionError("train_elm: empty feature matrix");
  if (labels.size() != x.rows()) {
    throw DimensionError("train_elm: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(x.rows()) + " samples");
  }
  if (class_count < 2) throw ConfigError("train_elm: class_count must be >= 2");
  require_finite(x, "train_elm");

  ScalingParams scaling = fit_scaling(x);
  RandomLayer layer = init_random_layer(config, x.cols());
  const Matrix a =
      build_hidden_matrix(layer.weights, layer.biases, apply_scaling(x, scaling), config.activation);
  const Matrix y = encode_targets(labels, class_count);
  Matrix alpha = min_norm_lstsq(a, y, config.rank_tol);

  ElmModel model(config, std::move(layer), std::move(alpha), std::move(scaling));
  model.set_train_seconds(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return model;
}

std::vector<Label> predict(const ElmModel& model, const Matrix& x) {
  return argmax_decode(model.scores(x));
}

}  // namespace elmlc
