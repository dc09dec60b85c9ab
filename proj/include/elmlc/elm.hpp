#ifndef ELMLC_ELM_HPP
#define ELMLC_ELM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elmlc/labels.hpp"
#include "elmlc/matrix.hpp"
#include "elmlc/scaling.hpp"

namespace elmlc {

enum class Activation { sigmoid, tanh, hardlimit };

/// Hidden-neuron transfer function. Saturates instead of overflowing, so the
/// result is finite for every finite input.
double activate(Activation kind, double z) noexcept;
std::string_view to_string(Activation kind) noexcept;
/// Throws ConfigError for an unknown name.
Activation parse_activation(std::string_view name);

/// Closed interval used for random weight initialization.
struct WeightRange {
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const WeightRange&, const WeightRange&) = default;
};

struct ElmConfig {
  std::size_t hidden_nodes = 300;
  Activation activation = Activation::sigmoid;
  std::uint64_t rng_seed = 42;
  WeightRange weight_range{-1.0, 1.0};
  double rank_tol = kDefaultRankTol;

  /// Throws ConfigError unless hidden_nodes >= 1, the range is finite and
  /// lo <= hi, and rank_tol >= 0.
  void validate() const;
  friend bool operator==(const ElmConfig&, const ElmConfig&) = default;
};

/// Input weights (H x p) and biases (H) of the untrained hidden layer.
struct RandomLayer {
  Matrix weights;
  std::vector<double> biases;
};

/// Draws every weight and bias independently and uniformly from
/// config.weight_range. A pure function of (seed, H, p, range): weights are
/// drawn row by row, then the biases.
RandomLayer init_random_layer(const ElmConfig& config, std::size_t feature_count);

/// K x H matrix with entry (j, i) = f(w_i . x_j + c_i).
Matrix build_hidden_matrix(const Matrix& weights, std::span<const double> biases,
                           const Matrix& x, Activation activation);

/// K x m one-hot target matrix. Throws ConfigError on an out-of-range label.
Matrix encode_targets(std::span<const Label> labels, std::size_t class_count);

/// Sum of squared residuals ||A alpha - Y||_F^2.
double training_cost(const Matrix& hidden, const Matrix& output_weights, const Matrix& targets);

/// Trained extreme learning machine. The hidden layer is fixed at
/// construction; only the output weights come from training.
class ElmModel {
 public:
  ElmModel(ElmConfig config, RandomLayer layer, Matrix output_weights, ScalingParams scaling);

  const ElmConfig& config() const noexcept { return config_; }
  const Matrix& input_weights() const noexcept { return layer_.weights; }
  const std::vector<double>& biases() const noexcept { return layer_.biases; }
  const Matrix& output_weights() const noexcept { return output_weights_; }
  const ScalingParams& scaling() const noexcept { return scaling_; }

  std::size_t hidden_nodes() const noexcept { return layer_.weights.rows(); }
  std::size_t feature_count() const noexcept { return layer_.weights.cols(); }
  std::size_t class_count() const noexcept { return output_weights_.cols(); }

  /// Hidden-layer outputs for raw (unscaled) features.
  Matrix hidden(const Matrix& x) const;
  /// Network outputs A * alpha, K x m, for raw features.
  Matrix scores(const Matrix& x) const;

  /// Wall-clock seconds spent in train_elm; 0 for a loaded model.
  double train_seconds() const noexcept { return train_seconds_; }
  void set_train_seconds(double s) noexcept { train_seconds_ = s; }

 private:
  ElmConfig config_;
  RandomLayer layer_;
  Matrix output_weights_;
  ScalingParams scaling_;
  double train_seconds_ = 0.0;
};

/// Three-step ELM training on raw features:
///   1. draw the random hidden layer,
///   2. build the hidden-layer output matrix A on the scaled features,
///   3. solve alpha = A^+ Y (minimum-norm least squares).
/// Classes absent from `labels` get an all-zero target column.
ElmModel train_elm(const Matrix& x, std::span<const Label> labels, std::size_t class_count,
                   const ElmConfig& config);

/// Argmax of the network outputs, lowest index on ties.
std::vector<Label> predict(const ElmModel& model, const Matrix& x);

}  // namespace elmlc

#endif  // ELMLC_ELM_HPP
