#include "elmlc/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "elmlc/error.hpp"

namespace elmlc {
namespace {

constexpr const char* kMagic = "elmlc-model";
constexpr int kVersion = 1;

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " " : "") + num(values[i]);
  return s;
}

void write_block(std::ostream& out, const char* name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << num(r[j]);
    out << '\n';
  }
}

void write_block(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << ' ' << 1 << ' ' << v.size() << '\n' << join(v) << '\n';
}

void write_common(std::ostream& out, const char* format, const ScalingParams& scaling,
                  const ModelInfo& info) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "format = " << format << '\n';
  out << "scaling_min = " << join(scaling.min) << '\n';
  out << "scaling_max = " << join(scaling.max) << '\n';
  out << "class_names = " << join(info.class_names) << '\n';
  out << "feature_names = " << join(info.feature_names) << '\n';
}

// Parsed file: header keys and named numeric blocks.
class ModelText {
 public:
  ModelText(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    if (!std::getline(in, line)) fail("empty model file", 0);
    ++line_no_;
    {
      std::istringstream ss(line);
      std::string magic;
      int version = 0;
      if (!(ss >> magic >> version) || magic != kMagic) fail("not an elmlc model file", 1);
      if (version != kVersion) fail("unsupported model version " + std::to_string(version), 1);
    }
    bool ended = false;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line == "end") {
        ended = true;
        break;
      }
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) {
        keys_[line.substr(0, eq)] = line.substr(eq + 3);
        continue;
      }
      if (line.size() > 2 && line.substr(line.size() - 2) == " =") {
        keys_[line.substr(0, line.size() - 2)] = "";
        continue;
      }
      read_block(in, line);
    }
    if (!ended) fail("missing 'end' line (truncated file?)", line_no_);
  }

  const std::string& key(const std::string& k) const {
    const auto it = keys_.find(k);
    if (it == keys_.end()) fail("missing key '" + k + "'", 0);
    return it->second;
  }

  std::size_t size(const std::string& k) const {
    const std::string& v = key(k);
    std::size_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      fail("key '" + k + "' is not a non-negative integer", 0);
    }
    return out;
  }

  double real(const std::string& k) const {
    const auto v = numbers(key(k), k);
    if (v.size() != 1) fail("key '" + k + "' must hold one number", 0);
    return v[0];
  }

  std::vector<double> reals(const std::string& k) const { return numbers(key(k), k); }

  std::vector<std::string> names(const std::string& k) const {
    std::vector<std::string> out;
    const std::string& v = key(k);
    if (v.empty()) return out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  }

  Matrix matrix(const std::string& name, std::size_t rows, std::size_t cols) const {
    const auto it = blocks_.find(name);
    if (it == blocks_.end()) fail("missing block '" + name + "'", 0);
    if (it->second.rows() != rows || it->second.cols() != cols) {
      fail("block '" + name + "' is " + std::to_string(it->second.rows()) + "x" +
               std::to_string(it->second.cols()) + ", expected " + std::to_string(rows) + "x" +
               std::to_string(cols),
           0);
    }
    return it->second;
  }

  std::vector<double> vector(const std::string& name, std::size_t n) const {
    const Matrix m = matrix(name, 1, n);
    return {m.data().begin(), m.data().end()};
  }

  [[noreturn]] void fail(const std::string& what, std::size_t line) const {
    throw ParseError(source_ + (line ? ": line " + std::to_string(line) : std::string()) + ": " +
                         what,
                     line, 0);
  }

 private:
  std::vector<double> numbers(const std::string& text, const std::string& what) const {
    std::vector<double> out;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) fail("bad number in '" + what + "'", line_no_);
      out.push_back(v);
      p = res.ptr;
      if (p < end && *p != ' ') fail("bad number in '" + what + "'", line_no_);
    }
    return out;
  }

  void read_block(std::istream& in, const std::string& header) {
    std::istringstream ss(header);
    std::string name;
    std::size_t rows = 0, cols = 0;
    if (!(ss >> name >> rows >> cols) || rows == 0 || cols == 0) {
      fail("expected 'key = value' or '<block> <rows> <cols>'", line_no_);
    }
    std::vector<double> data;
    data.reserve(rows * cols);
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) fail("block '" + name + "' is truncated", line_no_);
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto row = numbers(line, name);
      if (row.size() != cols) {
        fail("block '" + name + "' row has " + std::to_string(row.size()) + " values, expected " +
                 std::to_string(cols),
             line_no_);
      }
      data.insert(data.end(), row.begin(), row.end());
    }
    try {
      blocks_.insert_or_assign(name, Matrix(rows, cols, std::move(data)));
    } catch (const NumericalError&) {
      fail("block '" + name + "' holds a non-finite value", line_no_);
    }
  }

  std::string source_;
  std::size_t line_no_ = 0;
  std::map<std::string, std::string> keys_;
  std::map<std::string, Matrix> blocks_;
};

WeightRange read_range(const ModelText& t, const std::string& key) {
  const auto v = t.reals(key);
  if (v.size() != 2) t.fail("key '" + key + "' must hold two numbers", 0);
  return {v[0], v[1]};
}

ScalingParams read_scaling(const ModelText& t, std::size_t p) {
  ScalingParams s{t.reals("scaling_min"), t.reals("scaling_max")};
  if (s.min.size() != p || s.max.size() != p) {
    t.fail("scaling parameters do not cover " + std::to_string(p) + " features", 0);
  }
  return s;
}

ElmModel read_elm(const ModelText& t) {
  ElmConfig c;
  c.hidden_nodes = t.size("hidden_nodes");
  c.activation = parse_activation(t.key("activation"));
  c.rng_seed = t.size("seed");
  c.weight_range = read_range(t, "weight_range");
  c.rank_tol = t.real("rank_tol");
  const std::size_t p = t.size("feature_count");
  const std::size_t m = t.size("class_count");
  RandomLayer layer{t.matrix("input_weights", c.hidden_nodes, p),
                    t.vector("biases", c.hidden_nodes)};
  return ElmModel(c, std::move(layer), t.matrix("output_weights", c.hidden_nodes, m),
                  read_scaling(t, p));
}

MlpModel read_mlp(const ModelText& t) {
  MlpConfig c;
  c.hidden_nodes = t.size("hidden_nodes");
  c.learning_rate = t.real("learning_rate");
  c.momentum = t.real("momentum");
  c.iterations = t.size("iterations");
  c.rng_seed = t.size("seed");
  c.init_range = read_range(t, "init_range");
  c.update = parse_update_mode(t.key("update"));
  const std::size_t p = t.size("feature_count");
  const std::size_t m = t.size("class_count");
  const std::size_t h = c.hidden_nodes;
  MlpParams params{t.matrix("w1", h, p), t.vector("b1", h), t.matrix("w2", m, h),
                   t.vector("b2", m)};
  MlpParams velocity{t.matrix("velocity_w1", h, p), t.vector("velocity_b1", h),
                     t.matrix("velocity_w2", m, h), t.vector("velocity_b2", m)};
  return MlpModel(c, std::move(params), std::move(velocity), read_scaling(t, p));
}

template <typename Model>
void save_to(const Model& model, const ModelInfo& info, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(model, info, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_model(const ElmModel& model, const ModelInfo& info, std::ostream& out) {
  const ElmConfig& c = model.config();
  write_common(out, "elm", model.scaling(), info);
  out << "hidden_nodes = " << c.hidden_nodes << '\n';
  out << "feature_count = " << model.feature_count() << '\n';
  out << "class_count = " << model.class_count() << '\n';
  out << "activation = " << to_string(c.activation) << '\n';
  out << "seed = " << c.rng_seed << '\n';
  out << "weight_range = " << num(c.weight_range.lo) << ' ' << num(c.weight_range.hi) << '\n';
  out << "rank_tol = " << num(c.rank_tol) << '\n';
  write_block(out, "input_weights", model.input_weights());
  write_block(out, "biases", model.biases());
  write_block(out, "output_weights", model.output_weights());
  out << "end\n";
}

void write_model(const MlpModel& model, const ModelInfo& info, std::ostream& out) {
  const MlpConfig& c = model.config();
  write_common(out, "mlp", model.scaling(), info);
  out << "hidden_nodes = " << c.hidden_nodes << '\n';
  out << "feature_count = " << model.feature_count() << '\n';
  out << "class_count = " << model.class_count() << '\n';
  out << "learning_rate = " << num(c.learning_rate) << '\n';
  out << "momentum = " << num(c.momentum) << '\n';
  out << "iterations = " << c.iterations << '\n';
  out << "update = " << to_string(c.update) << '\n';
  out << "seed = " << c.rng_seed << '\n';
  out << "init_range = " << num(c.init_range.lo) << ' ' << num(c.init_range.hi) << '\n';
  write_block(out, "w1", model.params().w1);
  write_block(out, "b1", model.params().b1);
  write_block(out, "w2", model.params().w2);
  write_block(out, "b2", model.params().b2);
  write_block(out, "velocity_w1", model.velocity().w1);
  write_block(out, "velocity_b1", model.velocity().b1);
  write_block(out, "velocity_w2", model.velocity().w2);
  write_block(out, "velocity_b2", model.velocity().b2);
  out << "end\n";
}

LoadedModel read_model(std::istream& in, const std::string& source) {
  const ModelText t(in, source);
  const std::string& format = t.key("format");
  ModelInfo info{t.names("class_names"), t.names("feature_names")};
  try {
    if (format == "elm") return {read_elm(t), std::move(info)};
    if (format == "mlp") return {read_mlp(t), std::move(info)};
  } catch (const ConfigError& e) {
    t.fail(e.what(), 0);
  } catch (const DimensionError& e) {
    t.fail(e.what(), 0);
  }
  t.fail("unknown model format '" + format + "'", 0);
}

void save_model(const ElmModel& model, const ModelInfo& info, const std::filesystem::path& path) {
  save_to(model, info, path);
}

void save_model(const MlpModel& model, const ModelInfo& info, const std::filesystem::path& path) {
  save_to(model, info, path);
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_model(in, path.string());
}

}  // namespace elmlc
