#ifndef ELMLC_LABELS_HPP
#define ELMLC_LABELS_HPP

#include <cstdint>
#include <vector>

#include "elmlc/matrix.hpp"

namespace elmlc {

/// Dense class index in [0, class_count).
using Label = std::uint32_t;

/// Row-wise argmax of a score matrix. Ties resolve to the lowest class index.
/// Shared by every classifier so all of them decode identically.
std::vector<Label> argmax_decode(const Matrix& scores);

}  // namespace elmlc

#endif  // ELMLC_LABELS_HPP
