#ifndef ELMLC_MLP_HPP
#define ELMLC_MLP_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "elmlc/elm.hpp"
#include "elmlc/labels.hpp"
#include "elmlc/matrix.hpp"
#include "elmlc/scaling.hpp"

namespace elmlc {

/// How one training iteration updates the weights.
///   pattern: one pass over the training set in a seeded random order,
///            updating after every sample with that sample's gradient.
///   batch:   one update with the gradient of the cost over all samples.
enum class UpdateMode { pattern, batch };

std::string_view to_string(UpdateMode mode) noexcept;
/// Throws ConfigError for an unknown name.
UpdateMode parse_update_mode(std::string_view name);

struct MlpConfig {
  std::size_t hidden_nodes = 26;
  double learning_rate = 0.25;
  double momentum = 0.2;
  std::size_t iterations = 2200;
  std::uint64_t rng_seed = 42;
  WeightRange init_range{-0.5, 0.5};
  UpdateMode update = UpdateMode::pattern;

  /// Throws ConfigError unless hidden_nodes >= 1, learning_rate > 0,
  /// momentum in [0, 1), iterations >= 1 and init_range is a finite interval.
  void validate() const;
  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

/// Weights and biases of the p -> hidden -> m sigmoid network. Gradients use
/// the same layout.
struct MlpParams {
  Matrix w1;               // hidden x p
  std::vector<double> b1;  // hidden
  Matrix w2;               // m x hidden
  std::vector<double> b2;  // m

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Uniform draws from `range`: w1 row by row, b1, w2, b2.
MlpParams init_mlp_params(std::size_t feature_count, std::size_t hidden_nodes,
                          std::size_t class_count, const WeightRange& range, std::uint64_t seed);

/// sigmoid(sigmoid(x w1^T + b1) w2^T + b2), K x m. `x` is taken as given
/// (already scaled).
Matrix mlp_forward(const MlpParams& params, const Matrix& x);

/// C = sum over samples and outputs of (forward(x) - y)^2.
double mlp_cost(const MlpParams& params, const Matrix& x, const Matrix& y);

/// Exact gradient of mlp_cost by backpropagation.
MlpParams mlp_gradient(const MlpParams& params, const Matrix& x, const Matrix& y);

class MlpModel {
 public:
  MlpModel(MlpConfig config, MlpParams params, MlpParams velocity, ScalingParams scaling);

  const MlpConfig& config() const noexcept { return config_; }
  const MlpParams& params() const noexcept { return params_; }
  const MlpParams& velocity() const noexcept { return velocity_; }
  const ScalingParams& scaling() const noexcept { return scaling_; }

  std::size_t hidden_nodes() const noexcept { return params_.w1.rows(); }
  std::size_t feature_count() const noexcept { return params_.w1.cols(); }
  std::size_t class_count() const noexcept { return params_.w2.rows(); }

  /// Output-layer activations for raw (unscaled) features.
  Matrix scores(const Matrix& x) const;

 private:
  MlpConfig config_;
  MlpParams params_;
  MlpParams velocity_;
  ScalingParams scaling_;
};

struct MlpTraining {
  MlpModel model;
  std::vector<double> loss_history;  // one entry per iteration
  double train_seconds = 0.0;
};

/// Backpropagation with heavy-ball momentum on scaled features,
///   v <- momentum * v - learning_rate * g;  w <- w + v,
/// run for exactly config.iterations iterations.
///
/// In batch mode g is the gradient of C over the whole training set and
/// loss_history[i] is C before update i. In pattern mode g is the gradient of
/// one sample's squared error and loss_history[i] sums those errors, each
/// taken just before its own update, over iteration i.
///
/// Throws NumericalError naming the iteration if the cost becomes non-finite.
MlpTraining train_mlp(const Matrix& x, std::span<const Label> labels, std::size_t class_count,
                      const MlpConfig& config);

/// Same argmax decoder as predict(ElmModel, ...).
std::vector<Label> mlp_predict(const MlpModel& model, const Matrix& x);

}  // namespace elmlc

#endif  // ELMLC_MLP_HPP
