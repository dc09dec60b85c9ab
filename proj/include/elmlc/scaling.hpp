#ifndef ELMLC_SCALING_HPP
#define ELMLC_SCALING_HPP

#include <vector>

#include "elmlc/matrix.hpp"

namespace elmlc {

/// Per-feature affine map of the training range [min, max] onto [-1, 1].
/// Constant features map to 0. Values outside the training range are not
/// clipped.
struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t feature_count() const noexcept { return min.size(); }
  friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

ScalingParams fit_scaling(const Matrix& features);
Matrix apply_scaling(const Matrix& features, const ScalingParams& params);

}  // namespace elmlc

#endif  // ELMLC_SCALING_HPP
