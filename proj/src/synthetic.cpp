#include "elmlc/synthetic.hpp"

#include <algorithm>
#include <charconv>
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

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void SyntheticConfig::validate() const {
  const std::size_t p = feature_names.size();
  if (p < 1) throw ConfigError("synthetic config: no features");
  if (classes.size() < 2) throw ConfigError("synthetic config: at least 2 classes are required");
  for (const auto& c : classes) {
    if (c.mean.size() != p || c.covariance.rows() != p || c.covariance.cols() != p) {
      throw DimensionError("synthetic config: class '" + c.name + "' does not have " +
                           std::to_string(p) + " features");
    }
    if (c.count < 1) throw ConfigError("synthetic config: class '" + c.name + "' has no samples");
    if (c.train_count > c.count) {
      throw ConfigError("synthetic config: class '" + c.name + "' train count exceeds count");
    }
  }
}

SyntheticConfig littleport_like_config(std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.seed = seed;
  cfg.feature_names = {"b1", "b2", "b3", "b4", "b5", "b7"};

  const std::vector<std::string> names = {"wheat", "potato", "sugar_beet", "onion",
                                          "peas",  "lettuce", "beans"};
  const double means[7][6] = {
      {78, 62, 56, 92, 74, 40},  {74, 58, 50, 104, 70, 36}, {72, 56, 46, 112, 64, 32},
      {84, 70, 68, 80, 88, 54},  {76, 60, 52, 98, 78, 42},  {80, 66, 62, 86, 82, 48},
      {75, 59, 54, 100, 66, 38},
  };
  const double base_sd[6] = {1.86, 1.86, 2.48, 4.96, 3.72, 3.10};
  constexpr std::size_t kTestPerClass = 291;
  constexpr std::size_t kTrainPerClass = 385;
  constexpr std::size_t kTrainRemainder = 2700 - 7 * kTrainPerClass;

  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> train(names.size(), kTrainPerClass);
  for (std::size_t i = 0; i < kTrainRemainder; ++i) ++train[order[i]];

  for (std::size_t k = 0; k < names.size(); ++k) {
    SyntheticClass c;
    c.name = names[k];
    c.mean.assign(means[k], means[k] + 6);
    c.covariance = Matrix(6, 6);
    const double spread = 1.0 + 0.05 * static_cast<double>(k);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        double corr = i == j ? 1.0 : 0.5;
        if (i != j && (i == 3 || j == 3) && std::min(i, j) < 3) corr = 0.1;
        c.covariance(i, j) = corr * base_sd[i] * base_sd[j] * spread * spread;
      }
    }
    c.train_count = train[k];
    c.count = train[k] + kTestPerClass;
    cfg.classes.push_back(std::move(c));
  }
  return cfg;
}

LabeledDataset generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  const std::size_t p = config.feature_names.size();
  std::size_t total = 0;
  for (const auto& c : config.classes) total += c.count;

  LabeledDataset ds;
  ds.feature_names = config.feature_names;
  ds.provenance = "synthetic seed=" + std::to_string(config.seed);
  ds.features = Matrix(total, p);
  ds.labels.reserve(total);

  Rng rng(config.seed);
  std::vector<double> z(p);
  std::size_t row = 0;
  for (std::size_t k = 0; k < config.classes.size(); ++k) {
    const auto& c = config.classes[k];
    ds.class_names.push_back(c.name);
    const Matrix l = cholesky(c.covariance);
    for (std::size_t s = 0; s < c.count; ++s, ++row) {
      for (double& zi : z) zi = rng.normal();
      auto out = ds.features.row(row);
      for (std::size_t i = 0; i < p; ++i) {
        double v = c.mean[i];
        for (std::size_t j = 0; j <= i; ++j) v += l(i, j) * z[j];
        out[i] = v;
      }
      ds.labels.push_back(static_cast<Label>(k));
    }
  }
  return ds;
}

SplitSpec bundled_split(const SyntheticConfig& config) {
  std::vector<std::size_t> counts;
  for (const auto& c : config.classes) counts.push_back(c.train_count);
  return SplitSpec{std::move(counts), config.seed};
}

SyntheticConfig parse_synthetic_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ": line " + std::to_string(line_no) + ": expected 'key = value'",
                       line_no, 0);
    }
    kv[trim(line.substr(0, eq))] = {trim(line.substr(eq + 1)), line_no};
  }

  auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(source + ": missing key '" + key + "'");
    return it->second;
  };
  auto get_uint = [&](const std::string& key) -> std::uint64_t {
    const auto& [value, ln] = get(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw ParseError(source + ": line " + std::to_string(ln) + ": '" + key +
                           "' is not a non-negative integer",
                       ln, 0);
    }
    return v;
  };
  auto get_numbers = [&](const std::string& key, std::size_t expected) {
    const auto& [value, ln] = get(key);
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError(source + ": line " + std::to_string(ln) + ": bad number '" + tok + "'",
                         ln, 0);
      }
      out.push_back(v);
    }
    if (out.size() != expected) {
      throw ParseError(source + ": line " + std::to_string(ln) + ": '" + key + "' needs " +
                           std::to_string(expected) + " numbers, got " +
                           std::to_string(out.size()),
                       ln, 0);
    }
    return out;
  };

  SyntheticConfig cfg;
  cfg.seed = get_uint("seed");
  {
    std::istringstream ss(get("features").first);
    std::string name;
    while (std::getline(ss, name, ',')) cfg.feature_names.push_back(trim(name));
  }
  const std::size_t p = cfg.feature_names.size();
  const std::size_t m = get_uint("classes");
  for (std::size_t k = 0; k < m; ++k) {
    const std::string prefix = "class." + std::to_string(k) + ".";
    SyntheticClass c;
    c.name = get(prefix + "name").first;
    c.count = get_uint(prefix + "count");
    c.train_count = get_uint(prefix + "train");
    c.mean = get_numbers(prefix + "mean", p);
    c.covariance = Matrix(p, p, get_numbers(prefix + "cov", p * p));
    cfg.classes.push_back(std::move(c));
  }
  cfg.validate();
  return cfg;
}

SyntheticConfig load_synthetic_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_synthetic_config(in, path.string());
}

void write_synthetic_config(const SyntheticConfig& config, std::ostream& out) {
  out << "# elmlc synthetic generator config v1\n";
  out << "seed = " << config.seed << '\n';
  out << "features = ";
  for (std::size_t i = 0; i < config.feature_names.size(); ++i)
    out << (i ? "," : "") << config.feature_names[i];
  out << "\nclasses = " << config.classes.size() << '\n';
  for (std::size_t k = 0; k < config.classes.size(); ++k) {
    const auto& c = config.classes[k];
    const std::string prefix = "class." + std::to_string(k) + ".";
    out << prefix << "name = " << c.name << '\n';
    out << prefix << "count = " << c.count << '\n';
    out << prefix << "train = " << c.train_count << '\n';
    out << prefix << "mean =";
    for (double v : c.mean) out << ' ' << format_double(v);
    out << '\n' << prefix << "cov =";
    for (double v : c.covariance.data()) out << ' ' << format_double(v);
    out << '\n';
  }
}

}  // namespace elmlc
