#ifndef ELMLC_DATASET_HPP
#define ELMLC_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "elmlc/labels.hpp"
#include "elmlc/matrix.hpp"
#include "elmlc/scaling.hpp"

namespace elmlc {

/// Feature vectors with dense class labels.
struct LabeledDataset {
  Matrix features;                         // K x p
  std::vector<Label> labels;               // K entries in [0, m)
  std::vector<std::string> class_names;    // m names; index = label
  std::vector<std::string> feature_names;  // p names
  std::string provenance;                  // free-text source tag, not part of equality

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
  std::size_t class_count() const noexcept { return class_names.size(); }

  /// Throws DimensionError/ConfigError if the invariants (K >= 1, m >= 2,
  /// labels in range, name counts) do not hold.
  void validate() const;

  /// Rows in `indices` order, keeping names and provenance.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
    return a.features == b.features && a.labels == b.labels && a.class_names == b.class_names &&
           a.feature_names == b.feature_names;
  }
};

/// Which columns of a CSV file to read. Empty `feature_columns` selects every
/// column except the label column, in file order.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string label_column = "label";
};

/// Reads comma-separated text with a header row. Labels are mapped to dense
/// indices in order of first appearance. Throws IoError, or ParseError with
/// the 1-based file row and column of the offending cell.
LabeledDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
LabeledDataset parse_csv(std::istream& in, const CsvSchema& schema = {},
                         const std::string& source = "<stream>");

/// Unlabeled feature table: every column except `label_column` (when present),
/// in file order.
struct FeatureTable {
  Matrix features;
  std::vector<std::string> feature_names;
};
FeatureTable parse_feature_csv(std::istream& in, const std::string& label_column = "label",
                               const std::string& source = "<stream>");
FeatureTable load_feature_csv(const std::filesystem::path& path,
                              const std::string& label_column = "label");

/// Writes features with shortest round-trip decimal representation followed by
/// the label column (class names).
void save_csv(const LabeledDataset& ds, const std::filesystem::path& path,
              const std::string& label_column = "label");
void write_csv(const LabeledDataset& ds, std::ostream& out,
               const std::string& label_column = "label");

/// Stratified random split. Either a global fraction of every class goes to
/// training, or an explicit per-class training count is given.
///
/// Fraction rounding: each class gets floor(n_c * f) training samples; the
/// remaining floor(N * f) - sum_c floor(n_c * f) slots go one each to classes
/// taken in a seeded random order. Within a class, samples are drawn without
/// replacement by a seeded shuffle.
struct SplitSpec {
  std::variant<double, std::vector<std::size_t>> train;  // fraction or per-class counts
  std::uint64_t rng_seed = 42;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_indices;  // ascending indices into the source dataset
  std::vector<std::size_t> test_indices;   // ascending
};

/// Throws ConfigError if a class count exceeds its population, a fraction is
/// not in (0, 1), a class has fewer than 2 samples in fraction mode, or the
/// test set would be empty.
Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec);

/// Per-class training counts a spec resolves to for `ds`.
std::vector<std::size_t> resolve_train_counts(const LabeledDataset& ds, const SplitSpec& spec);

std::vector<std::size_t> class_counts(const LabeledDataset& ds);

/// Re-indexes both datasets onto one class list: a's classes in order, then
/// classes that only b has. Needed when train and test come from separate
/// files, whose label indices follow each file's first-appearance order.
void unify_classes(LabeledDataset& a, LabeledDataset& b);

ScalingParams fit_scaling(const LabeledDataset& train);
LabeledDataset apply_scaling(const LabeledDataset& ds, const ScalingParams& params);

/// 64-bit FNV-1a over shape, feature bits and labels, rendered as 16 hex digits.
std::string fingerprint(const LabeledDataset& ds);

}  // namespace elmlc

#endif  // ELMLC_DATASET_HPP
