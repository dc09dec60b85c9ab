#include "elmlc/report.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace elmlc {
namespace {

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string title(const std::string& classifier) {
  if (classifier == "elm") return "Extreme learning machine";
  if (classifier == "mlp") return "Back propagation neural network";
  return classifier;
}

std::string parameter_summary(const EvalReport& r) {
  auto get = [&](const std::string& k) {
    for (const auto& [key, value] : r.parameters)
      if (key == k) return value;
    return std::string("?");
  };
  if (r.classifier == "elm") return "Number of hidden nodes = " + get("hidden_nodes");
  return "Learning rate = " + get("learning_rate") + ", Momentum = " + get("momentum") +
         ", nodes in hidden layer = " + get("hidden_nodes") +
         ", number of iterations = " + get("iterations") + ", number of hidden layers = 1";
}

void write_confusion(std::ostream& out, const EvalReport& r,
                     const std::vector<std::string>& class_names) {
  const ConfusionMatrix& cm = r.confusion;
  const std::size_t m = cm.class_count();
  std::size_t w = 6;
  for (const auto& n : class_names) w = std::max(w, n.size() + 1);
  out << "Confusion matrix, " << title(r.classifier) << " (rows = true, columns = predicted)\n";
  out << pad("", w);
  for (std::size_t p = 0; p < m; ++p)
    out << pad(p < class_names.size() ? class_names[p] : std::to_string(p), w);
  out << '\n';
  for (std::size_t t = 0; t < m; ++t) {
    out << pad(t < class_names.size() ? class_names[t] : std::to_string(t), w);
    for (std::size_t p = 0; p < m; ++p) out << pad(std::to_string(cm(t, p)), w);
    out << '\n';
  }
}

void write_report_records(std::ostream& out, const std::string& prefix, const EvalReport& r) {
  out << prefix << ".classifier = " << r.classifier << '\n';
  for (const auto& [k, v] : r.parameters) out << prefix << ".param." << k << " = " << v << '\n';
  out << prefix << ".accuracy = " << num(r.overall_accuracy) << '\n';
  out << prefix << ".correct = " << r.confusion.correct() << '\n';
  out << prefix << ".total = " << r.confusion.total() << '\n';
  const std::size_t m = r.confusion.class_count();
  for (std::size_t t = 0; t < m; ++t) {
    out << prefix << ".confusion." << t << " =";
    for (std::size_t p = 0; p < m; ++p) out << ' ' << r.confusion(t, p);
    out << '\n';
  }
  out << prefix << ".train_fingerprint = " << r.train_fingerprint << '\n';
  out << prefix << ".test_fingerprint = " << r.test_fingerprint << '\n';
  out << prefix << ".environment = " << r.environment << '\n';
  out << prefix << ".train_time_s = " << num(r.train_time_s) << '\n';
  out << prefix << ".test_time_s = " << num(r.test_time_s) << '\n';
}

void write_metadata(std::ostream& out, const RunMetadata& metadata) {
  for (const auto& [k, v] : metadata) out << k << " = " << v << '\n';
}

}  // namespace

bool is_timing_key(const std::string& key) {
  const std::string suffix = "_time_s";
  if (key == "speedup") return true;
  return key.size() >= suffix.size() &&
         key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string format_benchmark_table(const BenchmarkResult& result,
                                   const std::vector<std::string>& class_names) {
  std::ostringstream out;
  const std::size_t w0 = 34, w1 = 60, w2 = 14;
  out << pad("Classifier used", w0) << pad("User defined parameters", w1)
      << pad("Accuracy (%)", w2) << "Computational cost (seconds)\n";
  for (const EvalReport* r : {&result.elm, &result.mlp}) {
    const std::string params = parameter_summary(*r);
    out << pad(title(r->classifier), w0) << pad(params, w1) << pad(fixed(r->overall_accuracy, 2), w2)
        << fixed(r->train_time_s + r->test_time_s, 3) << " (train " << fixed(r->train_time_s, 3)
        << ", test " << fixed(r->test_time_s, 3) << ")\n";
  }
  out << "\nTraining speedup (mlp / elm): " << fixed(result.speedup, 1) << "x\n";
  out << "Accuracy gap (elm - mlp): "
      << fixed(result.elm.overall_accuracy - result.mlp.overall_accuracy, 2)
      << " percentage points\n";
  out << "Environment: " << result.elm.environment << "\n\n";
  write_confusion(out, result.elm, class_names);
  out << '\n';
  write_confusion(out, result.mlp, class_names);
  return out.str();
}

std::string format_sweep_table(const SweepResult& result) {
  std::ostringstream out;
  out << pad("Hidden nodes", 14) << pad("Median acc (%)", 16) << pad("Min acc (%)", 13)
      << pad("Max acc (%)", 13) << "Median train time (s)\n";
  for (const auto& row : result.rows) {
    out << pad(std::to_string(row.hidden_nodes), 14) << pad(fixed(row.median_accuracy, 2), 16)
        << pad(fixed(row.min_accuracy, 2), 13) << pad(fixed(row.max_accuracy, 2), 13)
        << fixed(row.median_train_seconds, 4) << '\n';
  }
  out << "\nBest number of hidden nodes: " << result.best_h << " (seeds";
  for (auto s : result.seeds) out << ' ' << s;
  out << ")\n";
  return out.str();
}

void write_benchmark_records(const BenchmarkResult& result, const RunMetadata& metadata,
                             std::ostream& out) {
  out << "# elmlc benchmark report v1\n";
  write_metadata(out, metadata);
  write_report_records(out, "elm", result.elm);
  write_report_records(out, "mlp", result.mlp);
  if (!result.mlp_loss_history.empty()) {
    out << "mlp.final_cost = " << num(result.mlp_loss_history.back()) << '\n';
  }
  out << "accuracy_gap = " << num(result.elm.overall_accuracy - result.mlp.overall_accuracy)
      << '\n';
  out << "speedup = " << num(result.speedup) << '\n';
}

void write_sweep_records(const SweepResult& result, const ElmConfig& base,
                         const RunMetadata& metadata, std::ostream& out) {
  out << "# elmlc sweep report v1\n";
  write_metadata(out, metadata);
  for (const auto& [k, v] : describe(base)) out << "base." << k << " = " << v << '\n';
  out << "seeds =";
  for (auto s : result.seeds) out << ' ' << s;
  out << '\n';
  for (const auto& row : result.rows) {
    const std::string p = "h." + std::to_string(row.hidden_nodes);
    out << p << ".accuracies =";
    for (double a : row.accuracies) out << ' ' << num(a);
    out << '\n';
    out << p << ".median_accuracy = " << num(row.median_accuracy) << '\n';
    out << p << ".median_train_time_s = " << num(row.median_train_seconds) << '\n';
  }
  out << "best_h = " << result.best_h << '\n';
}

void write_training_records(const EvalReport& report, const RunMetadata& metadata,
                            std::ostream& out) {
  out << "# elmlc training report v1\n";
  write_metadata(out, metadata);
  write_report_records(out, report.classifier, report);
}

}  // namespace elmlc
