#include "elmlc/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "elmlc/dataset.hpp"
#include "elmlc/elm.hpp"
#include "elmlc/error.hpp"
#include "elmlc/eval.hpp"
#include "elmlc/mlp.hpp"
#include "elmlc/model_io.hpp"
#include "elmlc/report.hpp"
#include "elmlc/synthetic.hpp"

namespace elmlc {
namespace {

namespace fs = std::filesystem;

// Share of the data used for training when a single labeled file is split;
// 2700 of 4737 samples.
constexpr double kDefaultTrainFraction = 2700.0 / 4737.0;

struct Options {
  std::string classifier = "elm";
  std::optional<std::size_t> hidden;  // unset: classifier default
  std::size_t mlp_hidden = 26;
  std::string activation = "sigmoid";
  std::uint64_t seed = 42;
  double learning_rate = 0.25;
  double momentum = 0.2;
  std::size_t iterations = 2200;
  std::string update = "pattern";
  double train_fraction = kDefaultTrainFraction;
  double rank_tol = kDefaultRankTol;
  bool sequential_timing = true;
  std::string out;

  std::string train_path;
  std::string test_path;
  std::string data_path;
  std::string config_path;
  std::string model_path;
  std::string input_path;
  std::string label_column = "label";

  std::vector<std::size_t> h_values;
  std::size_t seeds_per_h = 5;
  std::size_t threads = 1;
  bool sweep_first = false;

  // Set after parsing.
  bool seed_given = false;
  bool fraction_given = false;
};

struct Data {
  LabeledDataset train;
  std::optional<LabeledDataset> test;
  RunMetadata metadata;
};

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void make_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "'");
}

ElmConfig elm_config(const Options& o) {
  ElmConfig c;
  c.hidden_nodes = o.hidden.value_or(300);
  c.activation = parse_activation(o.activation);
  c.rng_seed = o.seed;
  c.rank_tol = o.rank_tol;
  c.validate();
  return c;
}

MlpConfig mlp_config(const Options& o, std::size_t hidden) {
  MlpConfig c;
  c.hidden_nodes = hidden;
  c.learning_rate = o.learning_rate;
  c.momentum = o.momentum;
  c.iterations = o.iterations;
  c.update = parse_update_mode(o.update);
  c.rng_seed = o.seed;
  c.validate();
  return c;
}

void append(RunMetadata& md, const std::string& prefix,
            const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) md.emplace_back(prefix + k, v);
}

// Training (and optionally test) data from --train/--test, --data with a
// stratified split, or the built-in synthetic scene.
Data resolve_data(const Options& o, bool allow_synthetic) {
  Data d;
  if (!o.train_path.empty()) {
    CsvSchema schema;
    schema.label_column = o.label_column;
    d.train = load_csv(o.train_path, schema);
    d.metadata.emplace_back("data.train", o.train_path);
    if (!o.test_path.empty()) {
      LabeledDataset test = load_csv(o.test_path, schema);
      unify_classes(d.train, test);
      d.metadata.emplace_back("data.test", o.test_path);
      d.test = std::move(test);
    }
    return d;
  }

  LabeledDataset all;
  SplitSpec spec;
  if (!o.data_path.empty()) {
    CsvSchema schema;
    schema.label_column = o.label_column;
    all = load_csv(o.data_path, schema);
    spec = SplitSpec{o.train_fraction, o.seed};
    d.metadata.emplace_back("data.source", o.data_path);
  } else if (allow_synthetic) {
    SyntheticConfig cfg =
        o.config_path.empty() ? littleport_like_config(o.seed) : load_synthetic_config(o.config_path);
    if (o.seed_given) cfg.seed = o.seed;
    all = generate_synthetic(cfg);
    spec = o.fraction_given ? SplitSpec{o.train_fraction, cfg.seed} : bundled_split(cfg);
    d.metadata.emplace_back("data.source", o.config_path.empty() ? "synthetic littleport-like"
                                                                 : o.config_path);
    d.metadata.emplace_back("data.synthetic_seed", std::to_string(cfg.seed));
  } else {
    throw ConfigError("no input data: give --train (and --test) or --data");
  }

  Split split = stratified_split(all, spec);
  if (const double* f = std::get_if<double>(&spec.train)) {
    d.metadata.emplace_back("split.train_fraction", num(*f));
  } else {
    std::string counts;
    for (std::size_t c : std::get<std::vector<std::size_t>>(spec.train)) {
      counts += (counts.empty() ? "" : " ") + std::to_string(c);
    }
    d.metadata.emplace_back("split.train_counts", counts);
  }
  d.metadata.emplace_back("split.seed", std::to_string(spec.rng_seed));
  d.metadata.emplace_back("split.train_size", std::to_string(split.train.size()));
  d.metadata.emplace_back("split.test_size", std::to_string(split.test.size()));
  d.train = std::move(split.train);
  d.test = std::move(split.test);
  return d;
}

const LabeledDataset& require_test(const Data& d) {
  if (!d.test) throw ConfigError("no test data: give --test, or use --data with a split");
  return *d.test;
}

std::string predictions_csv(const std::vector<Label>& predicted,
                            const std::vector<std::string>& class_names) {
  std::string s = "predicted\n";
  for (Label l : predicted) {
    s += l < class_names.size() ? class_names[l] : std::to_string(l);
    s += '\n';
  }
  return s;
}

int cmd_generate(const Options& o, std::ostream& out) {
  make_dir(o.out);
  SyntheticConfig cfg =
      o.config_path.empty() ? littleport_like_config(o.seed) : load_synthetic_config(o.config_path);
  if (o.seed_given) cfg.seed = o.seed;
  const LabeledDataset all = generate_synthetic(cfg);
  const SplitSpec spec = o.fraction_given ? SplitSpec{o.train_fraction, cfg.seed} : bundled_split(cfg);
  const Split split = stratified_split(all, spec);

  const fs::path dir(o.out);
  save_csv(all, dir / "data.csv", o.label_column);
  save_csv(split.train, dir / "train.csv", o.label_column);
  save_csv(split.test, dir / "test.csv", o.label_column);
  {
    std::ofstream cfg_out = open_out(dir / "synthetic_config.txt");
    write_synthetic_config(cfg, cfg_out);
  }
  std::ostringstream rec;
  rec << "# elmlc generate report v1\n";
  rec << "data.source = " << (o.config_path.empty() ? "synthetic littleport-like" : o.config_path)
      << '\n';
  rec << "data.synthetic_seed = " << cfg.seed << '\n';
  rec << "split.seed = " << spec.rng_seed << '\n';
  if (o.fraction_given) rec << "split.train_fraction = " << num(o.train_fraction) << '\n';
  rec << "data.size = " << all.size() << '\n';
  rec << "split.train_size = " << split.train.size() << '\n';
  rec << "split.test_size = " << split.test.size() << '\n';
  rec << "split.train_fingerprint = " << fingerprint(split.train) << '\n';
  rec << "split.test_fingerprint = " << fingerprint(split.test) << '\n';
  write_text(dir / "generate.records", rec.str());

  out << "wrote " << all.size() << " samples (" << split.train.size() << " train, "
      << split.test.size() << " test, " << all.class_count() << " classes, "
      << all.feature_count() << " features) to " << o.out << '\n';
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ConfigError("--out is required");
  const Data d = resolve_data(o, /*allow_synthetic=*/false);
  const LabeledDataset& train = d.train;
  const ModelInfo info{train.class_names, train.feature_names};
  RunMetadata md = d.metadata;
  md.emplace_back("model.path", o.out);

  EvalReport report;
  report.classifier = o.classifier;
  report.environment = environment_note();
  report.train_fingerprint = fingerprint(train);
  std::vector<Label> fitted;
  if (o.classifier == "elm") {
    const ElmConfig cfg = elm_config(o);
    const ElmModel model = train_elm(train.features, train.labels, train.class_count(), cfg);
    report.train_time_s = model.train_seconds();
    report.parameters = describe(cfg);
    save_model(model, info, o.out);
    fitted = predict(model, train.features);
  } else if (o.classifier == "mlp") {
    const MlpConfig cfg = mlp_config(o, o.hidden.value_or(26));
    const MlpTraining t = train_mlp(train.features, train.labels, train.class_count(), cfg);
    report.train_time_s = t.train_seconds;
    report.parameters = describe(cfg);
    md.emplace_back("mlp.final_cost", num(t.loss_history.back()));
    save_model(t.model, info, o.out);
    fitted = mlp_predict(t.model, train.features);
  } else {
    throw ConfigError("unknown classifier '" + o.classifier + "' (expected elm or mlp)");
  }
  report.confusion = confusion(train.labels, fitted, train.class_count());
  report.overall_accuracy = report.confusion.overall_accuracy();

  std::ostringstream rec;
  write_training_records(report, md, rec);
  write_text(o.out + ".report", rec.str());
  out << "trained " << o.classifier << " on " << train.size() << " samples in "
      << num(report.train_time_s) << " s; training accuracy " << num(report.overall_accuracy)
      << "%; model written to " << o.out << '\n';
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  if (o.model_path.empty()) throw ConfigError("--model is required");
  if (o.input_path.empty()) throw ConfigError("--input is required");
  if (o.out.empty()) throw ConfigError("--out is required");
  const LoadedModel loaded = load_model(o.model_path);
  const FeatureTable table = load_feature_csv(o.input_path, o.label_column);

  std::vector<Label> predicted;
  RunMetadata md{{"model.path", o.model_path}, {"data.input", o.input_path}};
  if (const auto* elm = std::get_if<ElmModel>(&loaded.model)) {
    predicted = predict(*elm, table.features);
    md.emplace_back("model.format", "elm");
    append(md, "elm.", describe(elm->config()));
  } else {
    const auto& mlp = std::get<MlpModel>(loaded.model);
    predicted = mlp_predict(mlp, table.features);
    md.emplace_back("model.format", "mlp");
    append(md, "mlp.", describe(mlp.config()));
  }
  write_text(o.out, predictions_csv(predicted, loaded.info.class_names));

  std::ostringstream rec;
  rec << "# elmlc predict report v1\n";
  for (const auto& [k, v] : md) rec << k << " = " << v << '\n';
  rec << "predictions = " << predicted.size() << '\n';
  write_text(o.out + ".report", rec.str());
  out << "wrote " << predicted.size() << " predictions to " << o.out << '\n';
  return kExitOk;
}

SweepResult run_sweep(const Options& o, const LabeledDataset& train, const LabeledDataset& test,
                      const ElmConfig& base) {
  const std::vector<std::size_t> grid = o.h_values.empty() ? default_hidden_grid() : o.h_values;
  return sweep_hidden_nodes(train, test, grid, base, SweepOptions{o.seeds_per_h, o.threads});
}

int cmd_sweep(const Options& o, std::ostream& out) {
  make_dir(o.out);
  const Data d = resolve_data(o, /*allow_synthetic=*/true);
  const ElmConfig base = elm_config(o);
  const SweepResult result = run_sweep(o, d.train, require_test(d), base);

  const fs::path dir(o.out);
  const std::string table = format_sweep_table(result);
  write_text(dir / "sweep.txt", table);
  std::ostringstream rec;
  RunMetadata md = d.metadata;
  md.emplace_back("sweep.seeds_per_h", std::to_string(o.seeds_per_h));
  write_sweep_records(result, base, md, rec);
  write_text(dir / "sweep.records", rec.str());
  out << table;
  return kExitOk;
}

int cmd_benchmark(const Options& o, std::ostream& out) {
  make_dir(o.out);
  const Data d = resolve_data(o, /*allow_synthetic=*/true);
  const LabeledDataset& test = require_test(d);
  const fs::path dir(o.out);
  RunMetadata md = d.metadata;

  ElmConfig ecfg = elm_config(o);
  if (o.sweep_first) {
    const SweepResult sweep = run_sweep(o, d.train, test, ecfg);
    write_text(dir / "sweep.txt", format_sweep_table(sweep));
    std::ostringstream rec;
    write_sweep_records(sweep, ecfg, md, rec);
    write_text(dir / "sweep.records", rec.str());
    ecfg.hidden_nodes = sweep.best_h;
    md.emplace_back("sweep.best_h", std::to_string(sweep.best_h));
    out << format_sweep_table(sweep) << '\n';
  }
  const MlpConfig mcfg = mlp_config(o, o.mlp_hidden);
  md.emplace_back("benchmark.sequential_timing", o.sequential_timing ? "true" : "false");

  const BenchmarkResult r = benchmark(d.train, test, ecfg, mcfg, {o.sequential_timing});

  const ModelInfo info{d.train.class_names, d.train.feature_names};
  save_model(*r.elm_model, info, dir / "elm_model.txt");
  save_model(*r.mlp_model, info, dir / "mlp_model.txt");
  write_text(dir / "elm_predictions.csv", predictions_csv(r.elm_predictions, test.class_names));
  write_text(dir / "mlp_predictions.csv", predictions_csv(r.mlp_predictions, test.class_names));
  const std::string table = format_benchmark_table(r, test.class_names);
  write_text(dir / "benchmark.txt", table);
  std::ostringstream rec;
  write_benchmark_records(r, md, rec);
  write_text(dir / "benchmark.records", rec.str());
  out << table;
  return kExitOk;
}

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 internal error, 2 usage error (unknown flag or bad value),\n"
    "3 missing or unreadable file, 4 malformed CSV/model/config file, 5 dimension mismatch\n"
    "(e.g. model feature count differs from input columns), 6 numerical failure,\n"
    "7 invalid configuration.";

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--train", o.train_path, "Training CSV (header row, label column)");
  cmd->add_option("--test", o.test_path, "Test CSV");
  cmd->add_option("--data", o.data_path, "Single labeled CSV to split stratified by class");
  cmd->add_option("--label-column", o.label_column, "Name of the label column")
      ->capture_default_str();
  cmd->add_option("--train-fraction", o.train_fraction,
                  "Per-class training fraction for stratified splits")
      ->capture_default_str();
}

void add_elm_flags(CLI::App* cmd, Options& o, const std::string& hidden_help) {
  cmd->add_option("--hidden", o.hidden, hidden_help);
  cmd->add_option("--activation", o.activation, "ELM activation: sigmoid, tanh or hardlimit")
      ->capture_default_str();
  cmd->add_option("--rank-tol", o.rank_tol,
                  "Relative singular-value cutoff for the pseudoinverse")
      ->capture_default_str();
}

void add_mlp_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--learning-rate", o.learning_rate, "Backpropagation learning rate")
      ->capture_default_str();
  cmd->add_option("--momentum", o.momentum, "Backpropagation momentum in [0, 1)")
      ->capture_default_str();
  cmd->add_option("--iterations", o.iterations, "Backpropagation iterations (epochs)")
      ->capture_default_str();
  cmd->add_option("--update", o.update,
                  "Backpropagation update: pattern (per sample) or batch (full gradient)")
      ->capture_default_str();
}

void add_sweep_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--h-values", o.h_values,
                  "Hidden-node values to sweep (default 25 50 ... 450)");
  cmd->add_option("--seeds-per-h", o.seeds_per_h, "ELM seeds per hidden-node value")
      ->capture_default_str();
  cmd->add_option("--threads", o.threads, "Sweep worker threads (0 = all hardware threads)")
      ->capture_default_str();
}

int dispatch(int argc, const char* const* argv, std::ostream& out) {
  Options o;
  CLI::App app{"elmlc: extreme learning machine and backpropagation classifiers for "
               "multispectral pixel data"};
  app.name("elmlc");
  app.require_subcommand(1);
  app.footer(kExitCodeHelp);
  app.set_version_flag("--version", "elmlc 0.1.0");

  std::vector<CLI::Option*> seed_opts, fraction_opts;

  auto* gen = app.add_subcommand("generate", "Write synthetic multispectral CSVs");
  gen->add_option("--config", o.config_path, "Synthetic generator config file");
  seed_opts.push_back(
      gen->add_option("--seed", o.seed, "Generator and split seed")->capture_default_str());
  fraction_opts.push_back(
      gen->add_option("--train-fraction", o.train_fraction,
                      "Use a fractional stratified split instead of the config's counts"));
  gen->add_option("--label-column", o.label_column, "Name of the label column")
      ->capture_default_str();
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train a classifier and write a model file");
  train->add_option("--classifier", o.classifier, "elm or mlp")->capture_default_str();
  add_data_flags(train, o);
  fraction_opts.push_back(train->get_option("--train-fraction"));
  add_elm_flags(train, o, "Hidden nodes (default 300 for elm, 26 for mlp)");
  add_mlp_flags(train, o);
  seed_opts.push_back(train->add_option("--seed", o.seed, "Weight and split seed")
                          ->capture_default_str());
  train->add_option("--out", o.out, "Model file to write (report goes to <out>.report)")
      ->required();

  auto* pred = app.add_subcommand("predict", "Predict class labels with a saved model");
  pred->add_option("--model", o.model_path, "Model file")->required();
  pred->add_option("--input", o.input_path, "CSV of feature columns")->required();
  pred->add_option("--label-column", o.label_column, "Column to ignore if present")
      ->capture_default_str();
  pred->add_option("--out", o.out, "Predictions CSV to write")->required();

  auto* bench = app.add_subcommand(
      "benchmark", "Train and time ELM and backpropagation on the same split");
  add_data_flags(bench, o);
  fraction_opts.push_back(bench->get_option("--train-fraction"));
  bench->add_option("--config", o.config_path, "Synthetic generator config (no CSV given)");
  add_elm_flags(bench, o, "ELM hidden nodes (default 300)");
  bench->add_option("--mlp-hidden", o.mlp_hidden, "Backpropagation hidden nodes")
      ->capture_default_str();
  add_mlp_flags(bench, o);
  add_sweep_flags(bench, o);
  bench->add_flag("--sweep", o.sweep_first,
                  "Pick the ELM hidden-node count by a sweep on the test split first");
  bench->add_option("--sequential-timing", o.sequential_timing,
                    "Time the classifiers one after the other (true/false)")
      ->capture_default_str();
  seed_opts.push_back(bench->add_option("--seed", o.seed, "Global seed")->capture_default_str());
  bench->add_option("--out", o.out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep ELM hidden-node counts");
  add_data_flags(sweep, o);
  fraction_opts.push_back(sweep->get_option("--train-fraction"));
  sweep->add_option("--config", o.config_path, "Synthetic generator config (no CSV given)");
  add_elm_flags(sweep, o, "Ignored by the sweep; H comes from --h-values");
  add_sweep_flags(sweep, o);
  sweep->add_option("--sequential-timing", o.sequential_timing,
                    "Accepted for symmetry with benchmark; use --threads 1 for clean timings")
      ->capture_default_str();
  seed_opts.push_back(sweep->add_option("--seed", o.seed, "First ELM seed and split seed")
                          ->capture_default_str());
  sweep->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, out);
  }
  for (auto* opt : seed_opts) o.seed_given = o.seed_given || opt->count() > 0;
  for (auto* opt : fraction_opts) o.fraction_given = o.fraction_given || opt->count() > 0;

  if (gen->parsed()) return cmd_generate(o, out);
  if (train->parsed()) return cmd_train(o, out);
  if (pred->parsed()) return cmd_predict(o, out);
  if (bench->parsed()) return cmd_benchmark(o, out);
  return cmd_sweep(o, out);
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const std::string& what) {
    err << "elmlc: error: " << one_line(what) << '\n';
    return code;
  };
  try {
    return dispatch(argc, argv, out);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  } catch (const IoError& e) {
    return fail(kExitIo, e.what());
  } catch (const ParseError& e) {
    return fail(kExitMalformed, e.what());
  } catch (const DimensionError& e) {
    return fail(kExitDimension, e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, e.what());
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const std::exception& e) {
    return fail(kExitFailure, e.what());
  }
}

}  // namespace elmlc
