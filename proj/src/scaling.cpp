#include "elmlc/scaling.hpp"

#include <algorithm>
#include <string>

#include "elmlc/error.hpp"

namespace elmlc {

ScalingParams fit_scaling(const Matrix& features) {
  if (features.empty()) throw DimensionError("fit_scaling: empty feature matrix");
  ScalingParams p;
  p.min.assign(features.row(0).begin(), features.row(0).end());
  p.max = p.min;
  for (std::size_t i = 1; i < features.rows(); ++i) {
    const auto r = features.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      p.min[j] = std::min(p.min[j], r[j]);
      p.max[j] = std::max(p.max[j], r[j]);
    }
  }
  return p;
}

Matrix apply_scaling(const Matrix& features, const ScalingParams& params) {
  if (features.empty()) throw DimensionError("apply_scaling: empty feature matrix");
  if (features.cols() != params.feature_count() || params.max.size() != params.min.size()) {
    throw DimensionError("apply_scaling: data has " + std::to_string(features.cols()) +
                         " features, scaling has " + std::to_string(params.feature_count()));
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t j = 0; j < features.cols(); ++j) {
    const double lo = params.min[j];
    const double range = params.max[j] - lo;
    for (std::size_t i = 0; i < features.rows(); ++i) {
      out(i, j) = range > 0.0 ? 2.0 * (features(i, j) - lo) / range - 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace elmlc
