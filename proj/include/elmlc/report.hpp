#ifndef ELMLC_REPORT_HPP
#define ELMLC_REPORT_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "elmlc/eval.hpp"

namespace elmlc {

/// Extra "key = value" lines embedded in a record file, e.g. data sources and
/// split seeds, so that a result can be re-derived from the file alone.
using RunMetadata = std::vector<std::pair<std::string, std::string>>;

/// Human-readable comparison table: classifier, user-defined parameters,
/// accuracy (%), computational cost (s), followed by the confusion matrices.
std::string format_benchmark_table(const BenchmarkResult& result,
                                   const std::vector<std::string>& class_names);

/// Per-H table of median/min/max accuracy and median training time.
std::string format_sweep_table(const SweepResult& result);

/// Record file, one "key = value" per line, version header first. Keys ending
/// in "_time_s" and the key "speedup" hold wall-clock measurements; every other
/// line is a deterministic function of data and configuration.
void write_benchmark_records(const BenchmarkResult& result, const RunMetadata& metadata,
                             std::ostream& out);
void write_sweep_records(const SweepResult& result, const ElmConfig& base,
                         const RunMetadata& metadata, std::ostream& out);
void write_training_records(const EvalReport& report, const RunMetadata& metadata,
                            std::ostream& out);

/// True for record keys that carry wall-clock measurements.
bool is_timing_key(const std::string& key);

}  // namespace elmlc

#endif  // ELMLC_REPORT_HPP
