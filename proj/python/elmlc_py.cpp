#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "elmlc/dataset.hpp"
#include "elmlc/elm.hpp"
#include "elmlc/error.hpp"
#include "elmlc/eval.hpp"
#include "elmlc/matrix.hpp"
#include "elmlc/mlp.hpp"
#include "elmlc/model_io.hpp"
#include "elmlc/synthetic.hpp"

namespace py = pybind11;
using namespace elmlc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<Label, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    // A 1-D array is a single column.
    return Matrix(static_cast<std::size_t>(a.shape(0)), 1,
                  std::vector<double>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 2) throw DimensionError("expected a 1-D or 2-D array");
  return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  if (m.size()) std::memcpy(out.mutable_data(), m.data().data(), m.size() * sizeof(double));
  return out;
}

std::vector<Label> to_labels(const LabelArray& a) {
  if (a.ndim() != 1) throw DimensionError("labels must be a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<Label> label_array(const std::vector<Label>& v) {
  return py::array_t<Label>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["classifier"] = r.classifier;
  d["parameters"] = r.parameters;
  d["accuracy"] = r.overall_accuracy;
  d["train_time_s"] = r.train_time_s;
  d["test_time_s"] = r.test_time_s;
  const std::size_t m = r.confusion.class_count();
  py::array_t<std::size_t> cm({m, m});
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t p = 0; p < m; ++p) cm.mutable_at(t, p) = r.confusion(t, p);
  d["confusion"] = cm;
  d["environment"] = r.environment;
  return d;
}

}  // namespace

PYBIND11_MODULE(_elmlc, m) {
  m.doc() = "Extreme learning machine and backpropagation classifiers";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<DimensionError> dim_error(m, "DimensionError", error.ptr());
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  static py::exception<IoError> io_error(m, "IoError", error.ptr());
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<NumericalError> num_error(m, "NumericalError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DimensionError& e) {
      py::set_error(dim_error, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const IoError& e) {
      py::set_error(io_error, e.what());
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(num_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  // Linear algebra
  m.def(
      "svd",
      [](const Array& a) {
        const auto f = svd(to_matrix(a));
        return py::make_tuple(to_array(f.u), f.singular_values, to_array(f.v));
      },
      py::arg("a"), "Thin SVD; returns (u, singular_values, v).");
  m.def(
      "pseudoinverse",
      [](const Array& a, double tol) { return to_array(pseudoinverse(to_matrix(a), tol)); },
      py::arg("a"), py::arg("rank_tol") = kDefaultRankTol);
  m.def(
      "min_norm_lstsq",
      [](const Array& a, const Array& y, double tol) {
        return to_array(min_norm_lstsq(to_matrix(a), to_matrix(y), tol));
      },
      py::arg("a"), py::arg("y"), py::arg("rank_tol") = kDefaultRankTol);

  // ELM
  py::class_<ElmConfig>(m, "ElmConfig")
      .def(py::init([](std::size_t hidden, const std::string& activation, std::uint64_t seed,
                       double lo, double hi, double rank_tol) {
             ElmConfig c;
             c.hidden_nodes = hidden;
             c.activation = parse_activation(activation);
             c.rng_seed = seed;
             c.weight_range = {lo, hi};
             c.rank_tol = rank_tol;
             c.validate();
             return c;
           }),
           py::arg("hidden_nodes") = 300, py::arg("activation") = "sigmoid",
           py::arg("seed") = 42, py::arg("weight_lo") = -1.0, py::arg("weight_hi") = 1.0,
           py::arg("rank_tol") = kDefaultRankTol)
      .def_readwrite("hidden_nodes", &ElmConfig::hidden_nodes)
      .def_readwrite("seed", &ElmConfig::rng_seed)
      .def_readwrite("rank_tol", &ElmConfig::rank_tol)
      .def_property(
          "activation", [](const ElmConfig& c) { return std::string(to_string(c.activation)); },
          [](ElmConfig& c, const std::string& s) { c.activation = parse_activation(s); });

  py::class_<ElmModel>(m, "ElmModel")
      .def_property_readonly("input_weights", [](const ElmModel& e) { return to_array(e.input_weights()); })
      .def_property_readonly("biases", &ElmModel::biases)
      .def_property_readonly("output_weights", [](const ElmModel& e) { return to_array(e.output_weights()); })
      .def_property_readonly("hidden_nodes", &ElmModel::hidden_nodes)
      .def_property_readonly("feature_count", &ElmModel::feature_count)
      .def_property_readonly("class_count", &ElmModel::class_count)
      .def_property_readonly("train_seconds", &ElmModel::train_seconds)
      .def("hidden", [](const ElmModel& e, const Array& x) { return to_array(e.hidden(to_matrix(x))); })
      .def("scores", [](const ElmModel& e, const Array& x) { return to_array(e.scores(to_matrix(x))); })
      .def("predict", [](const ElmModel& e, const Array& x) { return label_array(predict(e, to_matrix(x))); });

  m.def(
      "train_elm",
      [](const Array& x, const LabelArray& labels, std::size_t class_count,
         const ElmConfig& config) {
        return train_elm(to_matrix(x), to_labels(labels), class_count, config);
      },
      py::arg("x"), py::arg("labels"), py::arg("class_count"), py::arg("config") = ElmConfig{});
  m.def(
      "encode_targets",
      [](const LabelArray& labels, std::size_t m) {
        return to_array(encode_targets(to_labels(labels), m));
      },
      py::arg("labels"), py::arg("class_count"));
  m.def(
      "training_cost",
      [](const Array& a, const Array& alpha, const Array& y) {
        return training_cost(to_matrix(a), to_matrix(alpha), to_matrix(y));
      },
      py::arg("hidden"), py::arg("output_weights"), py::arg("targets"));

  // MLP
  py::class_<MlpConfig>(m, "MlpConfig")
      .def(py::init([](std::size_t hidden, double lr, double momentum, std::size_t iterations,
                       std::uint64_t seed, const std::string& update) {
             MlpConfig c;
             c.hidden_nodes = hidden;
             c.learning_rate = lr;
             c.momentum = momentum;
             c.iterations = iterations;
             c.rng_seed = seed;
             c.update = parse_update_mode(update);
             c.validate();
             return c;
           }),
           py::arg("hidden_nodes") = 26, py::arg("learning_rate") = 0.25,
           py::arg("momentum") = 0.2, py::arg("iterations") = 2200, py::arg("seed") = 42,
           py::arg("update") = "pattern")
      .def_readwrite("hidden_nodes", &MlpConfig::hidden_nodes)
      .def_readwrite("learning_rate", &MlpConfig::learning_rate)
      .def_readwrite("momentum", &MlpConfig::momentum)
      .def_readwrite("iterations", &MlpConfig::iterations)
      .def_readwrite("seed", &MlpConfig::rng_seed)
      .def_property(
          "update", [](const MlpConfig& c) { return std::string(to_string(c.update)); },
          [](MlpConfig& c, const std::string& s) { c.update = parse_update_mode(s); });

  py::class_<MlpModel>(m, "MlpModel")
      .def_property_readonly("hidden_nodes", &MlpModel::hidden_nodes)
      .def_property_readonly("feature_count", &MlpModel::feature_count)
      .def_property_readonly("class_count", &MlpModel::class_count)
      .def("scores", [](const MlpModel& e, const Array& x) { return to_array(e.scores(to_matrix(x))); })
      .def("predict", [](const MlpModel& e, const Array& x) { return label_array(mlp_predict(e, to_matrix(x))); });

  m.def(
      "train_mlp",
      [](const Array& x, const LabelArray& labels, std::size_t class_count,
         const MlpConfig& config) {
        auto r = train_mlp(to_matrix(x), to_labels(labels), class_count, config);
        return py::make_tuple(std::move(r.model), r.loss_history, r.train_seconds);
      },
      py::arg("x"), py::arg("labels"), py::arg("class_count"), py::arg("config") = MlpConfig{},
      "Returns (model, loss_history, train_seconds).");

  // Datasets
  py::class_<LabeledDataset>(m, "LabeledDataset")
      .def(py::init([](const Array& x, const LabelArray& labels, std::vector<std::string> classes,
                       std::vector<std::string> features) {
             LabeledDataset ds{to_matrix(x), to_labels(labels), std::move(classes),
                               std::move(features), "python"};
             ds.validate();
             return ds;
           }),
           py::arg("features"), py::arg("labels"), py::arg("class_names"),
           py::arg("feature_names") = std::vector<std::string>{})
      .def_property_readonly("features", [](const LabeledDataset& d) { return to_array(d.features); })
      .def_property_readonly("labels", [](const LabeledDataset& d) { return label_array(d.labels); })
      .def_readonly("class_names", &LabeledDataset::class_names)
      .def_readonly("feature_names", &LabeledDataset::feature_names)
      .def("__len__", &LabeledDataset::size)
      .def("fingerprint", [](const LabeledDataset& d) { return fingerprint(d); });

  m.def("load_csv", [](const std::filesystem::path& p, const std::string& label) {
          return load_csv(p, CsvSchema{{}, label});
        }, py::arg("path"), py::arg("label_column") = "label");
  m.def("save_csv", [](const LabeledDataset& d, const std::filesystem::path& p) { save_csv(d, p); },
        py::arg("dataset"), py::arg("path"));

  m.def(
      "generate_synthetic",
      [](std::uint64_t seed) {
        const auto cfg = littleport_like_config(seed);
        auto ds = generate_synthetic(cfg);
        auto split = stratified_split(ds, bundled_split(cfg));
        return py::make_tuple(std::move(ds), std::move(split.train), std::move(split.test));
      },
      py::arg("seed") = 42,
      "Default 7-class, 6-band synthetic scene; returns (all, train, test).");

  m.def(
      "stratified_split",
      [](const LabeledDataset& ds, py::object train, std::uint64_t seed) {
        SplitSpec spec;
        spec.rng_seed = seed;
        if (py::isinstance<py::float_>(train))
          spec.train = train.cast<double>();
        else
          spec.train = train.cast<std::vector<std::size_t>>();
        auto s = stratified_split(ds, spec);
        return py::make_tuple(std::move(s.train), std::move(s.test), s.train_indices,
                              s.test_indices);
      },
      py::arg("dataset"), py::arg("train"), py::arg("seed") = 42,
      "train is a fraction (float) or per-class counts; returns (train, test, train_idx, test_idx).");

  // Evaluation
  m.def(
      "confusion",
      [](const LabelArray& truth, const LabelArray& pred, std::size_t classes) {
        const auto c = confusion(to_labels(truth), to_labels(pred), classes);
        py::array_t<std::size_t> out({classes, classes});
        for (std::size_t t = 0; t < classes; ++t)
          for (std::size_t p = 0; p < classes; ++p) out.mutable_at(t, p) = c(t, p);
        return py::make_tuple(out, c.overall_accuracy());
      },
      py::arg("truth"), py::arg("predicted"), py::arg("class_count"),
      "Returns (counts, overall_accuracy_percent).");

  m.def(
      "benchmark",
      [](const LabeledDataset& train, const LabeledDataset& test, const ElmConfig& ec,
         const MlpConfig& mc) {
        BenchmarkResult r;
        {
          py::gil_scoped_release release;
          r = benchmark(train, test, ec, mc);
        }
        py::dict d;
        d["elm"] = report_dict(r.elm);
        d["mlp"] = report_dict(r.mlp);
        d["speedup"] = r.speedup;
        d["elm_predictions"] = label_array(r.elm_predictions);
        d["mlp_predictions"] = label_array(r.mlp_predictions);
        d["mlp_loss_history"] = r.mlp_loss_history;
        return d;
      },
      py::arg("train"), py::arg("test"), py::arg("elm_config") = ElmConfig{},
      py::arg("mlp_config") = MlpConfig{});

  m.def(
      "sweep_hidden_nodes",
      [](const LabeledDataset& train, const LabeledDataset& val, std::vector<std::size_t> h,
         const ElmConfig& base, std::size_t seeds, std::size_t threads) {
        if (h.empty()) h = default_hidden_grid();
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep_hidden_nodes(train, val, h, base, {seeds, threads});
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["hidden_nodes"] = row.hidden_nodes;
          d["accuracies"] = row.accuracies;
          d["median_accuracy"] = row.median_accuracy;
          d["min_accuracy"] = row.min_accuracy;
          d["max_accuracy"] = row.max_accuracy;
          d["median_train_seconds"] = row.median_train_seconds;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["best_h"] = r.best_h;
        out["seeds"] = r.seeds;
        return out;
      },
      py::arg("train"), py::arg("validation"), py::arg("h_values") = std::vector<std::size_t>{},
      py::arg("base") = ElmConfig{}, py::arg("seeds_per_h") = 5, py::arg("threads") = 1);

  // Model files
  m.def("save_model", [](const ElmModel& e, const std::filesystem::path& p, std::vector<std::string> classes,
                         std::vector<std::string> features) {
          save_model(e, ModelInfo{std::move(classes), std::move(features)}, p);
        }, py::arg("model"), py::arg("path"), py::arg("class_names") = std::vector<std::string>{},
        py::arg("feature_names") = std::vector<std::string>{});
  m.def("save_model", [](const MlpModel& e, const std::filesystem::path& p, std::vector<std::string> classes,
                         std::vector<std::string> features) {
          save_model(e, ModelInfo{std::move(classes), std::move(features)}, p);
        }, py::arg("model"), py::arg("path"), py::arg("class_names") = std::vector<std::string>{},
        py::arg("feature_names") = std::vector<std::string>{});
  m.def("load_model", [](const std::filesystem::path& p) -> py::object {
    auto loaded = load_model(p);
    return std::visit([](auto& model) { return py::cast(std::move(model)); }, loaded.model);
  }, py::arg("path"));
}
