#include "elmlc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "elmlc/error.hpp"
#include "elmlc/random.hpp"

namespace elmlc {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

void LabeledDataset::validate() const {
  if (features.empty() || labels.empty()) throw DimensionError("dataset: no samples");
  if (features.rows() != labels.size()) {
    throw DimensionError("dataset: " + std::to_string(features.rows()) + " feature rows but " +
                         std::to_string(labels.size()) + " labels");
  }
  if (class_names.size() < 2) throw ConfigError("dataset: at least 2 classes are required");
  if (!feature_names.empty() && feature_names.size() != features.cols()) {
    throw DimensionError("dataset: " + std::to_string(feature_names.size()) +
                         " feature names for " + std::to_string(features.cols()) + " columns");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_names.size()) {
      throw ConfigError("dataset: label " + std::to_string(labels[i]) + " at sample " +
                        std::to_string(i) + " is out of range");
    }
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.class_names = class_names;
  out.feature_names = feature_names;
  out.provenance = provenance;
  if (indices.empty()) return out;
  out.features = Matrix(indices.size(), features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    if (src >= size()) throw DimensionError("subset: index out of range");
    std::copy_n(features.row(src).begin(), features.cols(), out.features.row(r).begin());
    out.labels.push_back(labels[src]);
  }
  return out;
}

namespace {

constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);

LabeledDataset read_table(std::istream& in, const CsvSchema& schema, const std::string& source,
                          bool label_required) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(source + ": empty file", 0, 0);
  std::vector<std::string> header = split_fields(line);
  for (auto& h : header) h = trim(h);
  const std::size_t header_row = line_no;

  auto find_column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(source + ": missing column '" + name + "'", header_row, 0);
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  std::size_t label_col = kNoColumn;
  if (label_required) {
    label_col = find_column(schema.label_column);
  } else if (const auto it = std::find(header.begin(), header.end(), schema.label_column);
             it != header.end()) {
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::size_t> feature_cols;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != label_col) feature_cols.push_back(c);
  } else {
    for (const auto& name : schema.feature_columns) feature_cols.push_back(find_column(name));
  }
  if (feature_cols.empty()) throw ParseError(source + ": no feature columns", header_row, 0);

  LabeledDataset ds;
  ds.provenance = source;
  for (std::size_t c : feature_cols) ds.feature_names.push_back(header[c]);

  std::vector<double> values;
  std::map<std::string, Label> class_index;
  std::size_t rows = 0;
  while (next_line()) {
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(source + ": row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(header.size()),
                       line_no, 0);
    }
    for (std::size_t c : feature_cols) {
      const std::string cell = trim(fields[c]);
      double v = 0.0;
      const char* first = cell.data();
      const char* last = first + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw ParseError(source + ": row " + std::to_string(line_no) + ", column " +
                             std::to_string(c + 1) + " ('" + header[c] +
                             "'): cannot parse '" + cell + "' as a finite number",
                         line_no, c + 1);
      }
      values.push_back(v);
    }
    ++rows;
    if (label_col == kNoColumn) continue;
    const std::string name = trim(fields[label_col]);
    if (name.empty()) {
      throw ParseError(source + ": row " + std::to_string(line_no) + ", column " +
                           std::to_string(label_col + 1) + ": empty label",
                       line_no, label_col + 1);
    }
    auto [it, inserted] = class_index.try_emplace(name, static_cast<Label>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(name);
    ds.labels.push_back(it->second);
  }
  if (rows == 0) throw ParseError(source + ": no data rows", header_row, 0);
  ds.features = Matrix(rows, feature_cols.size(), std::move(values));
  return ds;
}

}  // namespace

LabeledDataset parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
  return read_table(in, schema, source, /*label_required=*/true);
}

FeatureTable parse_feature_csv(std::istream& in, const std::string& label_column,
                               const std::string& source) {
  CsvSchema schema;
  schema.label_column = label_column;
  LabeledDataset ds = read_table(in, schema, source, /*label_required=*/false);
  return {std::move(ds.features), std::move(ds.feature_names)};
}

FeatureTable load_feature_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_feature_csv(in, label_column, path.string());
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_csv(in, schema, path.string());
}

void write_csv(const LabeledDataset& ds, std::ostream& out, const std::string& label_column) {
  ds.validate();
  for (std::size_t j = 0; j < ds.feature_count(); ++j) {
    out << (ds.feature_names.empty() ? "f" + std::to_string(j + 1) : ds.feature_names[j]) << ',';
  }
  out << label_column << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features.row(i)) out << format_double(v) << ',';
    out << ds.class_names[ds.labels[i]] << '\n';
  }
}

void save_csv(const LabeledDataset& ds, const std::filesystem::path& path,
              const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(ds, out, label_column);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::size_t> class_counts(const LabeledDataset& ds) {
  std::vector<std::size_t> counts(ds.class_count(), 0);
  for (Label l : ds.labels) ++counts.at(l);
  return counts;
}

void unify_classes(LabeledDataset& a, LabeledDataset& b) {
  std::vector<std::string> names = a.class_names;
  std::map<std::string, Label> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<Label>(i));
  for (const auto& n : b.class_names) {
    if (index.emplace(n, static_cast<Label>(names.size())).second) names.push_back(n);
  }
  for (LabeledDataset* ds : {&a, &b}) {
    for (Label& l : ds->labels) l = index.at(ds->class_names.at(l));
    ds->class_names = names;
  }
}

std::vector<std::size_t> resolve_train_counts(const LabeledDataset& ds, const SplitSpec& spec) {
  ds.validate();
  const std::vector<std::size_t> pop = class_counts(ds);
  const std::size_t m = pop.size();

  if (const auto* counts = std::get_if<std::vector<std::size_t>>(&spec.train)) {
    if (counts->size() != m) {
      throw ConfigError("split: " + std::to_string(counts->size()) + " per-class counts for " +
                        std::to_string(m) + " classes");
    }
    for (std::size_t c = 0; c < m; ++c) {
      if ((*counts)[c] > pop[c]) {
        throw ConfigError("split: class '" + ds.class_names[c] + "' has " +
                          std::to_string(pop[c]) + " samples, " + std::to_string((*counts)[c]) +
                          " requested for training");
      }
    }
    return *counts;
  }

  const double f = std::get<double>(spec.train);
  if (!(f > 0.0 && f < 1.0)) {
    throw ConfigError("split: train fraction must be in (0, 1), got " + format_double(f));
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (pop[c] < 2) {
      throw ConfigError("split: class '" + ds.class_names[c] +
                        "' needs at least 2 samples for a fractional split");
    }
  }
  // The small slack absorbs products such as 0.29 * 100 = 28.999999999999996.
  auto floor_of = [f](std::size_t n) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
  };
  std::vector<std::size_t> counts(m);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < m; ++c) assigned += counts[c] = floor_of(pop[c]);
  std::size_t remainder = floor_of(ds.size()) - assigned;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t c : order) {
    if (remainder == 0) break;
    if (counts[c] < pop[c]) {
      ++counts[c];
      --remainder;
    }
  }
  return counts;
}

Split stratified_split(const LabeledDataset& ds, const SplitSpec& spec) {
  const std::vector<std::size_t> counts = resolve_train_counts(ds, spec);
  const std::size_t m = ds.class_count();

  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t i = 0; i < ds.size(); ++i) members[ds.labels[i]].push_back(i);

  Rng rng(spec.rng_seed);
  Split out;
  for (std::size_t c = 0; c < m; ++c) {
    auto& idx = members[c];
    rng.shuffle(std::span<std::size_t>(idx));
    out.train_indices.insert(out.train_indices.end(), idx.begin(), idx.begin() + counts[c]);
    out.test_indices.insert(out.test_indices.end(), idx.begin() + counts[c], idx.end());
  }
  if (out.test_indices.empty()) throw ConfigError("split: test set would be empty");
  if (out.train_indices.empty()) throw ConfigError("split: train set would be empty");
  std::sort(out.train_indices.begin(), out.train_indices.end());
  std::sort(out.test_indices.begin(), out.test_indices.end());
  out.train = ds.subset(out.train_indices);
  out.test = ds.subset(out.test_indices);
  return out;
}

ScalingParams fit_scaling(const LabeledDataset& train) {
  if (train.size() == 0) throw DimensionError("fit_scaling: empty training set");
  return fit_scaling(train.features);
}

LabeledDataset apply_scaling(const LabeledDataset& ds, const ScalingParams& params) {
  LabeledDataset out = ds;
  out.features = apply_scaling(ds.features, params);
  return out;
}

std::string fingerprint(const LabeledDataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {ds.features.rows(), ds.features.cols()};
  mix(dims, sizeof dims);
  for (double v : ds.features.data()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(&bits, sizeof bits);
  }
  for (Label l : ds.labels) {
    const std::uint32_t v = l;
    mix(&v, sizeof v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace elmlc
