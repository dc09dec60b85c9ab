#include "elmlc/mlp.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "elmlc/error.hpp"
#include "elmlc/random.hpp"

namespace elmlc {
namespace {

double sigmoid(double z) noexcept { return activate(Activation::sigmoid, z); }

void check_shapes(const MlpParams& p, const Matrix& x) {
  if (p.w1.empty() || p.w2.empty()) throw DimensionError("mlp: empty parameters");
  if (x.empty()) throw DimensionError("mlp: empty input");
  if (x.cols() != p.w1.cols()) {
    throw DimensionError("mlp: network expects " + std::to_string(p.w1.cols()) +
                         " features, input has " + std::to_string(x.cols()));
  }
  if (p.b1.size() != p.w1.rows() || p.w2.cols() != p.w1.rows() || p.b2.size() != p.w2.rows()) {
    throw DimensionError("mlp: inconsistent parameter shapes");
  }
}

// Hidden activations (K x h) and outputs (K x m).
struct ForwardPass {
  Matrix hidden;
  Matrix output;
};

ForwardPass forward_pass(const MlpParams& p, const Matrix& x) {
  check_shapes(p, x);
  ForwardPass f{matmul_transposed(x, p.w1), Matrix()};
  for (std::size_t i = 0; i < f.hidden.rows(); ++i) {
    auto r = f.hidden.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = sigmoid(r[j] + p.b1[j]);
  }
  f.output = matmul_transposed(f.hidden, p.w2);
  for (std::size_t i = 0; i < f.output.rows(); ++i) {
    auto r = f.output.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = sigmoid(r[k] + p.b2[k]);
  }
  return f;
}

double sse(const Matrix& out, const Matrix& y) {
  double c = 0.0;
  const auto o = out.data();
  const auto t = y.data();
  for (std::size_t i = 0; i < o.size(); ++i) c += (o[i] - t[i]) * (o[i] - t[i]);
  return c;
}

void check_targets(const Matrix& x, const Matrix& y, const MlpParams& p) {
  if (y.rows() != x.rows() || y.cols() != p.w2.rows()) {
    throw DimensionError("mlp: targets are " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()) + ", expected " + std::to_string(x.rows()) +
                         "x" + std::to_string(p.w2.rows()));
  }
}

MlpParams gradient_from(const MlpParams& p, const Matrix& x, const Matrix& y,
                        const ForwardPass& f) {
  const std::size_t k_samples = x.rows();
  const std::size_t h = p.w1.rows();
  const std::size_t m = p.w2.rows();

  // delta2 = dC/dz2 = 2 (o - y) o (1 - o)
  Matrix delta2(k_samples, m);
  for (std::size_t i = 0; i < k_samples; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const double o = f.output(i, k);
      delta2(i, k) = 2.0 * (o - y(i, k)) * o * (1.0 - o);
    }
  }
  // delta1 = (delta2 w2) * a (1 - a)
  Matrix delta1 = matmul(delta2, p.w2);
  for (std::size_t i = 0; i < k_samples; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      const double a = f.hidden(i, j);
      delta1(i, j) *= a * (1.0 - a);
    }
  }

  MlpParams g{transposed_matmul(delta1, x), std::vector<double>(h, 0.0),
              transposed_matmul(delta2, f.hidden), std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < k_samples; ++i) {
    for (std::size_t j = 0; j < h; ++j) g.b1[j] += delta1(i, j);
    for (std::size_t k = 0; k < m; ++k) g.b2[k] += delta2(i, k);
  }
  return g;
}

MlpParams zeros_like(const MlpParams& p) {
  return {Matrix(p.w1.rows(), p.w1.cols()), std::vector<double>(p.b1.size(), 0.0),
          Matrix(p.w2.rows(), p.w2.cols()), std::vector<double>(p.b2.size(), 0.0)};
}

void momentum_step(std::span<double> w, std::span<double> v, std::span<const double> g,
                   double momentum, double step) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    v[i] = momentum * v[i] - step * g[i];
    w[i] += v[i];
  }
}

void throw_diverged(std::size_t iteration) {
  throw NumericalError("train_mlp: cost became non-finite at iteration " +
                       std::to_string(iteration));
}

void train_batch(MlpParams& params, MlpParams& velocity, const Matrix& xs, const Matrix& y,
                 const MlpConfig& config, std::vector<double>& history) {
  for (std::size_t it = 0; it < config.iterations; ++it) {
    ForwardPass f;
    try {
      f = forward_pass(params, xs);
    } catch (const NumericalError&) {
      throw_diverged(it);
    }
    const double cost = sse(f.output, y);
    if (!std::isfinite(cost)) throw_diverged(it);
    history.push_back(cost);
    const MlpParams g = gradient_from(params, xs, y, f);
    const double step = config.learning_rate;
    momentum_step(params.w1.data(), velocity.w1.data(), g.w1.data(), config.momentum, step);
    momentum_step(params.b1, velocity.b1, g.b1, config.momentum, step);
    momentum_step(params.w2.data(), velocity.w2.data(), g.w2.data(), config.momentum, step);
    momentum_step(params.b2, velocity.b2, g.b2, config.momentum, step);
  }
}

// Per-sample updates on flat loops; the allocation-free inner loop is what
// keeps thousands of epochs affordable.
void train_pattern(MlpParams& params, MlpParams& velocity, const Matrix& xs, const Matrix& y,
                   const MlpConfig& config, std::vector<double>& history) {
  const std::size_t k_samples = xs.rows();
  const std::size_t p = xs.cols();
  const std::size_t h = params.w1.rows();
  const std::size_t m = params.w2.rows();
  const double lr = config.learning_rate;
  const double mu = config.momentum;

  std::vector<std::size_t> order(k_samples);
  for (std::size_t i = 0; i < k_samples; ++i) order[i] = i;
  Rng rng(config.rng_seed ^ 0x5deece66dULL);
  std::vector<double> a(h), delta1(h), delta2(m);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    rng.shuffle(std::span<std::size_t>(order));
    double cost = 0.0;
    for (const std::size_t s : order) {
      const auto x = xs.row(s);
      const auto t = y.row(s);
      for (std::size_t j = 0; j < h; ++j) {
        const auto w = params.w1.row(j);
        double z = params.b1[j];
        for (std::size_t i = 0; i < p; ++i) z += w[i] * x[i];
        a[j] = sigmoid(z);
      }
      for (std::size_t k = 0; k < m; ++k) {
        const auto w = params.w2.row(k);
        double z = params.b2[k];
        for (std::size_t j = 0; j < h; ++j) z += w[j] * a[j];
        const double o = sigmoid(z);
        cost += (o - t[k]) * (o - t[k]);
        delta2[k] = 2.0 * (o - t[k]) * o * (1.0 - o);
      }
      for (std::size_t j = 0; j < h; ++j) {
        double back = 0.0;
        for (std::size_t k = 0; k < m; ++k) back += delta2[k] * params.w2(k, j);
        delta1[j] = back * a[j] * (1.0 - a[j]);
      }
      for (std::size_t k = 0; k < m; ++k) {
        auto w = params.w2.row(k);
        auto v = velocity.w2.row(k);
        for (std::size_t j = 0; j < h; ++j) {
          v[j] = mu * v[j] - lr * delta2[k] * a[j];
          w[j] += v[j];
        }
        velocity.b2[k] = mu * velocity.b2[k] - lr * delta2[k];
        params.b2[k] += velocity.b2[k];
      }
      for (std::size_t j = 0; j < h; ++j) {
        auto w = params.w1.row(j);
        auto v = velocity.w1.row(j);
        for (std::size_t i = 0; i < p; ++i) {
          v[i] = mu * v[i] - lr * delta1[j] * x[i];
          w[i] += v[i];
        }
        velocity.b1[j] = mu * velocity.b1[j] - lr * delta1[j];
        params.b1[j] += velocity.b1[j];
      }
    }
    if (!std::isfinite(cost)) throw_diverged(it);
    history.push_back(cost);
  }
}

}  // namespace

std::string_view to_string(UpdateMode mode) noexcept {
  return mode == UpdateMode::batch ? "batch" : "pattern";
}

UpdateMode parse_update_mode(std::string_view name) {
  if (name == "pattern") return UpdateMode::pattern;
  if (name == "batch") return UpdateMode::batch;
  throw ConfigError("unknown update mode '" + std::string(name) + "' (expected pattern or batch)");
}

void MlpConfig::validate() const {
  if (hidden_nodes < 1) throw ConfigError("MlpConfig: hidden_nodes must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("MlpConfig: learning_rate must be finite and > 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("MlpConfig: momentum must be in [0, 1)");
  }
  if (iterations < 1) throw ConfigError("MlpConfig: iterations must be >= 1");
  if (!std::isfinite(init_range.lo) || !std::isfinite(init_range.hi) ||
      init_range.lo > init_range.hi) {
    throw ConfigError("MlpConfig: init_range must be a finite interval with lo <= hi");
  }
}

MlpParams init_mlp_params(std::size_t feature_count, std::size_t hidden_nodes,
                          std::size_t class_count, const WeightRange& range, std::uint64_t seed) {
  if (feature_count < 1 || hidden_nodes < 1 || class_count < 1) {
    throw ConfigError("init_mlp_params: all layer sizes must be >= 1");
  }
  Rng rng(seed);
  MlpParams p{Matrix(hidden_nodes, feature_count), std::vector<double>(hidden_nodes),
              Matrix(class_count, hidden_nodes), std::vector<double>(class_count)};
  for (double& w : p.w1.data()) w = rng.uniform(range.lo, range.hi);
  for (double& b : p.b1) b = rng.uniform(range.lo, range.hi);
  for (double& w : p.w2.data()) w = rng.uniform(range.lo, range.hi);
  for (double& b : p.b2) b = rng.uniform(range.lo, range.hi);
  return p;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& x) {
  return forward_pass(params, x).output;
}

double mlp_cost(const MlpParams& params, const Matrix& x, const Matrix& y) {
  check_targets(x, y, params);
  return sse(mlp_forward(params, x), y);
}

MlpParams mlp_gradient(const MlpParams& params, const Matrix& x, const Matrix& y) {
  const ForwardPass f = forward_pass(params, x);
  check_targets(x, y, params);
  return gradient_from(params, x, y, f);
}

MlpModel::MlpModel(MlpConfig config, MlpParams params, MlpParams velocity, ScalingParams scaling)
    : config_(config),
      params_(std::move(params)),
      velocity_(std::move(velocity)),
      scaling_(std::move(scaling)) {
  config_.validate();
  if (params_.w1.empty() || params_.w2.empty() || params_.w1.rows() != config_.hidden_nodes ||
      params_.b1.size() != params_.w1.rows() || params_.w2.cols() != params_.w1.rows() ||
      params_.b2.size() != params_.w2.rows()) {
    throw DimensionError("MlpModel: inconsistent parameter shapes");
  }
  if (velocity_.w1.rows() != params_.w1.rows() || velocity_.w1.cols() != params_.w1.cols() ||
      velocity_.b1.size() != params_.b1.size() || velocity_.w2.rows() != params_.w2.rows() ||
      velocity_.w2.cols() != params_.w2.cols() || velocity_.b2.size() != params_.b2.size()) {
    throw DimensionError("MlpModel: velocity shapes differ from parameter shapes");
  }
  if (scaling_.feature_count() != params_.w1.cols() ||
      scaling_.max.size() != scaling_.min.size()) {
    throw DimensionError("MlpModel: scaling covers " + std::to_string(scaling_.feature_count()) +
                         " features, network expects " + std::to_string(params_.w1.cols()));
  }
}

Matrix MlpModel::scores(const Matrix& x) const {
  if (x.cols() != feature_count()) {
    throw DimensionError("MlpModel: model expects " + std::to_string(feature_count()) +
                         " features, input has " + std::to_string(x.cols()));
  }
  return mlp_forward(params_, apply_scaling(x, scaling_));
}

MlpTraining train_mlp(const Matrix& x, std::span<const Label> labels, std::size_t class_count,
                      const MlpConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (x.empty()) throw DimensionError("train_mlp: empty feature matrix");
  if (labels.size() != x.rows()) {
    throw DimensionError("train_mlp: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(x.rows()) + " samples");
  }
  if (class_count < 2) throw ConfigError("train_mlp: class_count must be >= 2");
  require_finite(x, "train_mlp");

  ScalingParams scaling = fit_scaling(x);
  const Matrix xs = apply_scaling(x, scaling);
  const Matrix y = encode_targets(labels, class_count);
  MlpParams params =
      init_mlp_params(x.cols(), config.hidden_nodes, class_count, config.init_range, config.rng_seed);
  MlpParams velocity = zeros_like(params);

  std::vector<double> history;
  history.reserve(config.iterations);
  if (config.update == UpdateMode::batch) {
    train_batch(params, velocity, xs, y, config, history);
  } else {
    train_pattern(params, velocity, xs, y, config, history);
  }

  MlpTraining out{MlpModel(config, std::move(params), std::move(velocity), std::move(scaling)),
                  std::move(history), 0.0};
  out.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<Label> mlp_predict(const MlpModel& model, const Matrix& x) {
  return argmax_decode(model.scores(x));
}

}  // namespace elmlc
