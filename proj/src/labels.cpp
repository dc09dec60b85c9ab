#include "elmlc/labels.hpp"

#include "elmlc/error.hpp"

namespace elmlc {

std::vector<Label> argmax_decode(const Matrix& scores) {
  if (scores.empty()) throw DimensionError("argmax_decode: empty score matrix");
  std::vector<Label> out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[best]) best = k;
    out[i] = static_cast<Label>(best);
  }
  return out;
}

}  // namespace elmlc
