#ifndef ELMLC_MODEL_IO_HPP
#define ELMLC_MODEL_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "elmlc/elm.hpp"
#include "elmlc/mlp.hpp"

namespace elmlc {

/// Names carried alongside a model so predictions can be written as class names.
struct ModelInfo {
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  friend bool operator==(const ModelInfo&, const ModelInfo&) = default;
};

struct LoadedModel {
  std::variant<ElmModel, MlpModel> model;
  ModelInfo info;
};

/// Model file format, version 1:
///
///   elmlc-model 1
///   format = elm | mlp
///   key = value                 (hyperparameters, seed, scaling, names)
///   ...
///   <block> <rows> <cols>       (row-major numbers, one row per line)
///   ...
///   end
///
/// Numbers use the shortest decimal form that parses back to the same double,
/// so load(save(m)) reproduces the model bit for bit.
void write_model(const ElmModel& model, const ModelInfo& info, std::ostream& out);
void write_model(const MlpModel& model, const ModelInfo& info, std::ostream& out);
LoadedModel read_model(std::istream& in, const std::string& source = "<stream>");

void save_model(const ElmModel& model, const ModelInfo& info, const std::filesystem::path& path);
void save_model(const MlpModel& model, const ModelInfo& info, const std::filesystem::path& path);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace elmlc

#endif  // ELMLC_MODEL_IO_HPP
