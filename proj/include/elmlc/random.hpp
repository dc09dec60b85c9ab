#ifndef ELMLC_RANDOM_HPP
#define ELMLC_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace elmlc {

/// Seeded random source with platform-independent output.
///
/// Wraps std::mt19937_64 (whose sequence is fixed by the standard); the
/// distributions are implemented here because the standard library ones are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi]; lo == hi returns lo.
  double uniform(double lo, double hi);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Uniform integer in [0, n), n >= 1, without modulo bias.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace elmlc

#endif  // ELMLC_RANDOM_HPP
