#ifndef ELMLC_EVAL_HPP
#define ELMLC_EVAL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "elmlc/dataset.hpp"
#include "elmlc/elm.hpp"
#include "elmlc/labels.hpp"
#include "elmlc/mlp.hpp"

namespace elmlc {

/// counts(t, p) = number of samples of true class t predicted as p.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t class_count);

  std::size_t class_count() const noexcept { return m_; }
  std::size_t operator()(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * m_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted) { ++counts_.at(truth * m_ + predicted); }

  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  /// 100 * trace / total; 0 for an empty matrix.
  double overall_accuracy() const noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t m_;
  std::vector<std::size_t> counts_;
};

/// Throws DimensionError on length mismatch, ConfigError on out-of-range labels.
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted,
                          std::size_t class_count);

/// One row of the accuracy/cost comparison.
struct EvalReport {
  std::string classifier;  // "elm" or "mlp"
  std::vector<std::pair<std::string, std::string>> parameters;  // user-defined parameters
  ConfusionMatrix confusion{2};
  double overall_accuracy = 0.0;  // percent
  double train_time_s = 0.0;
  double test_time_s = 0.0;
  std::string environment;
  std::string train_fingerprint;
  std::string test_fingerprint;
};

std::vector<std::pair<std::string, std::string>> describe(const ElmConfig& config);
std::vector<std::pair<std::string, std::string>> describe(const MlpConfig& config);

/// CPU model and hardware thread count, read from the host.
std::string environment_note();

struct BenchmarkOptions {
  /// Run the two classifiers one after the other so their timings do not
  /// share cores. When false they run concurrently.
  bool sequential_timing = true;
};

struct BenchmarkResult {
  EvalReport elm;
  EvalReport mlp;
  double speedup = 0.0;  // mlp.train_time_s / elm.train_time_s
  std::optional<ElmModel> elm_model;
  std::optional<MlpModel> mlp_model;
  std::vector<Label> elm_predictions;
  std::vector<Label> mlp_predictions;
  std::vector<double> mlp_loss_history;
};

/// Trains both classifiers on `train`, evaluates on `test`, and times training
/// and prediction separately with a monotonic clock (I/O excluded). Both runs
/// fingerprint the data they receive; a mismatch throws Error.
BenchmarkResult benchmark(const LabeledDataset& train, const LabeledDataset& test,
                          const ElmConfig& elm_config, const MlpConfig& mlp_config,
                          const BenchmarkOptions& options = {});

struct SweepRow {
  std::size_t hidden_nodes = 0;
  std::vector<double> accuracies;  // one per seed, seed order
  double median_accuracy = 0.0;
  double min_accuracy = 0.0;
  double max_accuracy = 0.0;
  double median_train_seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;      // strictly increasing hidden_nodes
  std::size_t best_h = 0;          // highest median accuracy, smallest H on ties
  std::vector<std::uint64_t> seeds;
};

struct SweepOptions {
  std::size_t seeds_per_h = 5;
  /// Worker threads; 1 runs sequentially, 0 uses the hardware thread count.
  std::size_t threads = 1;
};

/// 25, 50, ..., 450.
std::vector<std::size_t> default_hidden_grid();

/// Trains an ELM for every H and every seed base.rng_seed + s, s < seeds_per_h,
/// and records validation accuracy. Results do not depend on the thread count.
SweepResult sweep_hidden_nodes(const LabeledDataset& train, const LabeledDataset& validation,
                               std::span<const std::size_t> h_values, const ElmConfig& base,
                               const SweepOptions& options = {});

}  // namespace elmlc

#endif  // ELMLC_EVAL_HPP
