#include "elmlc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <future>
#include <string>
#include <thread>

#include "elmlc/error.hpp"

namespace elmlc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_compatible(const LabeledDataset& train, const LabeledDataset& test) {
  train.validate();
  test.validate();
  if (train.feature_count() != test.feature_count()) {
    throw DimensionError("train has " + std::to_string(train.feature_count()) +
                         " features, test has " + std::to_string(test.feature_count()));
  }
  if (train.class_count() != test.class_count()) {
    throw DimensionError("train has " + std::to_string(train.class_count()) +
                         " classes, test has " + std::to_string(test.class_count()));
  }
}

struct ElmRun {
  EvalReport report;
  std::optional<ElmModel> model;
  std::vector<Label> predictions;
};

struct MlpRun {
  EvalReport report;
  std::optional<MlpModel> model;
  std::vector<Label> predictions;
  std::vector<double> loss_history;
};

ElmRun run_elm(const LabeledDataset& train, const LabeledDataset& test, const ElmConfig& config,
               const std::string& env) {
  ElmRun run;
  run.report.classifier = "elm";
  run.report.parameters = describe(config);
  run.report.environment = env;
  run.report.train_fingerprint = fingerprint(train);
  run.report.test_fingerprint = fingerprint(test);

  auto start = Clock::now();
  run.model.emplace(train_elm(train.features, train.labels, train.class_count(), config));
  run.report.train_time_s = seconds_since(start);

  start = Clock::now();
  run.predictions = predict(*run.model, test.features);
  run.report.test_time_s = seconds_since(start);

  run.report.confusion = confusion(test.labels, run.predictions, test.class_count());
  run.report.overall_accuracy = run.report.confusion.overall_accuracy();
  return run;
}

MlpRun run_mlp(const LabeledDataset& train, const LabeledDataset& test, const MlpConfig& config,
               const std::string& env) {
  MlpRun run;
  run.report.classifier = "mlp";
  run.report.parameters = describe(config);
  run.report.environment = env;
  run.report.train_fingerprint = fingerprint(train);
  run.report.test_fingerprint = fingerprint(test);

  auto start = Clock::now();
  MlpTraining trained = train_mlp(train.features, train.labels, train.class_count(), config);
  run.report.train_time_s = seconds_since(start);
  run.model.emplace(std::move(trained.model));
  run.loss_history = std::move(trained.loss_history);

  start = Clock::now();
  run.predictions = mlp_predict(*run.model, test.features);
  run.report.test_time_s = seconds_since(start);

  run.report.confusion = confusion(test.labels, run.predictions, test.class_count());
  run.report.overall_accuracy = run.report.confusion.overall_accuracy();
  return run;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t class_count)
    : m_(class_count), counts_(class_count * class_count, 0) {
  if (class_count < 1) throw ConfigError("ConfusionMatrix: class_count must be >= 1");
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (std::size_t c : counts_) t += c;
  return t;
}

std::size_t ConfusionMatrix::correct() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < m_; ++i) t += counts_[i * m_ + i];
  return t;
}

double ConfusionMatrix::overall_accuracy() const noexcept {
  const std::size_t n = total();
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(correct()) / static_cast<double>(n);
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted,
                          std::size_t class_count) {
  if (truth.size() != predicted.size()) {
    throw DimensionError("confusion: " + std::to_string(truth.size()) + " true labels but " +
                         std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm(class_count);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= class_count || predicted[i] >= class_count) {
      throw ConfigError("confusion: label out of range at sample " + std::to_string(i));
    }
    cm.add(truth[i], predicted[i]);
  }
  return cm;
}

std::vector<std::pair<std::string, std::string>> describe(const ElmConfig& c) {
  return {{"hidden_nodes", std::to_string(c.hidden_nodes)},
          {"activation", std::string(to_string(c.activation))},
          {"seed", std::to_string(c.rng_seed)},
          {"weight_range", num(c.weight_range.lo) + " " + num(c.weight_range.hi)},
          {"rank_tol", num(c.rank_tol)}};
}

std::vector<std::pair<std::string, std::string>> describe(const MlpConfig& c) {
  return {{"learning_rate", num(c.learning_rate)},
          {"momentum", num(c.momentum)},
          {"hidden_nodes", std::to_string(c.hidden_nodes)},
          {"iterations", std::to_string(c.iterations)},
          {"hidden_layers", "1"},
          {"update", std::string(to_string(c.update))},
          {"seed", std::to_string(c.rng_seed)},
          {"init_range", num(c.init_range.lo) + " " + num(c.init_range.hi)}};
}

std::string environment_note() {
  std::string cpu = "unknown CPU";
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        cpu = line.substr(colon + 1);
        cpu.erase(0, cpu.find_first_not_of(' '));
      }
      break;
    }
  }
  return cpu + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

BenchmarkResult benchmark(const LabeledDataset& train, const LabeledDataset& test,
                          const ElmConfig& elm_config, const MlpConfig& mlp_config,
                          const BenchmarkOptions& options) {
  check_compatible(train, test);
  elm_config.validate();
  mlp_config.validate();
  const std::string env = environment_note();

  ElmRun elm;
  MlpRun mlp;
  if (options.sequential_timing) {
    elm = run_elm(train, test, elm_config, env);
    mlp = run_mlp(train, test, mlp_config, env);
  } else {
    auto elm_future =
        std::async(std::launch::async, [&] { return run_elm(train, test, elm_config, env); });
    mlp = run_mlp(train, test, mlp_config, env);
    elm = elm_future.get();
  }

  if (elm.report.train_fingerprint != mlp.report.train_fingerprint ||
      elm.report.test_fingerprint != mlp.report.test_fingerprint) {
    throw Error("benchmark: classifiers were not given identical train/test data");
  }

  BenchmarkResult r;
  r.speedup = elm.report.train_time_s > 0.0 ? mlp.report.train_time_s / elm.report.train_time_s
                                            : 0.0;
  r.elm = std::move(elm.report);
  r.mlp = std::move(mlp.report);
  r.elm_model = std::move(elm.model);
  r.mlp_model = std::move(mlp.model);
  r.elm_predictions = std::move(elm.predictions);
  r.mlp_predictions = std::move(mlp.predictions);
  r.mlp_loss_history = std::move(mlp.loss_history);
  return r;
}

std::vector<std::size_t> default_hidden_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t h = 25; h <= 450; h += 25) grid.push_back(h);
  return grid;
}

SweepResult sweep_hidden_nodes(const LabeledDataset& train, const LabeledDataset& validation,
                               std::span<const std::size_t> h_values, const ElmConfig& base,
                               const SweepOptions& options) {
  check_compatible(train, validation);
  base.validate();
  if (h_values.empty()) throw ConfigError("sweep: no hidden-node values");
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (h_values[i] < 1) throw ConfigError("sweep: hidden-node values must be >= 1");
    if (i > 0 && h_values[i] <= h_values[i - 1]) {
      throw ConfigError("sweep: hidden-node values must be strictly increasing");
    }
  }
  if (options.seeds_per_h < 1) throw ConfigError("sweep: seeds_per_h must be >= 1");

  SweepResult result;
  for (std::size_t s = 0; s < options.seeds_per_h; ++s) result.seeds.push_back(base.rng_seed + s);

  const std::size_t n_seeds = options.seeds_per_h;
  const std::size_t n_jobs = h_values.size() * n_seeds;
  std::vector<double> accuracy(n_jobs), seconds(n_jobs);

  auto job = [&](std::size_t j) {
    ElmConfig cfg = base;
    cfg.hidden_nodes = h_values[j / n_seeds];
    cfg.rng_seed = result.seeds[j % n_seeds];
    const ElmModel model = train_elm(train.features, train.labels, train.class_count(), cfg);
    seconds[j] = model.train_seconds();
    accuracy[j] = confusion(validation.labels, predict(model, validation.features),
                            validation.class_count())
                      .overall_accuracy();
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n_jobs);
  if (threads == 1) {
    for (std::size_t j = 0; j < n_jobs; ++j) job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t j; (j = next.fetch_add(1)) < n_jobs;) job(j);
      }));
    }
    for (auto& w : workers) w.get();
  }

  for (std::size_t i = 0; i < h_values.size(); ++i) {
    SweepRow row;
    row.hidden_nodes = h_values[i];
    row.accuracies.assign(accuracy.begin() + i * n_seeds, accuracy.begin() + (i + 1) * n_seeds);
    row.median_accuracy = median(row.accuracies);
    row.min_accuracy = *std::min_element(row.accuracies.begin(), row.accuracies.end());
    row.max_accuracy = *std::max_element(row.accuracies.begin(), row.accuracies.end());
    row.median_train_seconds =
        median({seconds.begin() + i * n_seeds, seconds.begin() + (i + 1) * n_seeds});
    result.rows.push_back(std::move(row));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].median_accuracy > result.rows[best].median_accuracy) best = i;
  }
  result.best_h = result.rows[best].hidden_nodes;
  return result;
}

}  // namespace elmlc
