#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>

#include "elmlc/dataset.hpp"
#include "elmlc/error.hpp"
#include "elmlc/synthetic.hpp"
#include "oracles.hpp"

using elmlc::Matrix;

namespace {

elmlc::LabeledDataset make_dataset(std::vector<std::size_t> per_class, std::uint64_t seed) {
  elmlc::Rng rng(seed);
  elmlc::LabeledDataset ds;
  const std::size_t n = std::accumulate(per_class.begin(), per_class.end(), std::size_t{0});
  ds.features = oracle::random_matrix(n, 3, rng, -100, 100);
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    ds.class_names.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < per_class[c]; ++i) ds.labels.push_back(static_cast<elmlc::Label>(c));
  }
  rng.shuffle(std::span<elmlc::Label>(ds.labels));
  ds.feature_names = {"x", "y", "z"};
  return ds;
}

// Renumbers classes by first appearance, the order a CSV reader recovers.
elmlc::LabeledDataset canonical(elmlc::LabeledDataset ds) {
  std::vector<int> map(ds.class_count(), -1);
  std::vector<std::string> names;
  for (auto& l : ds.labels) {
    if (map[l] < 0) {
      map[l] = static_cast<int>(names.size());
      names.push_back(ds.class_names[l]);
    }
    l = static_cast<elmlc::Label>(map[l]);
  }
  ds.class_names = names;
  return ds;
}

}  // namespace

TEST_CASE("csv parsing maps labels in first-appearance order") {
  std::istringstream in("f1,f2,label\n1,2,a\n3,4,b\n5,6,a\n");
  const auto ds = elmlc::parse_csv(in);
  CHECK(ds.size() == 3);
  CHECK(ds.feature_count() == 2);
  CHECK(ds.class_count() == 2);
  CHECK(ds.labels == std::vector<elmlc::Label>{0, 1, 0});
  CHECK(ds.class_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.features == (Matrix{{1, 2}, {3, 4}, {5, 6}}));
}

TEST_CASE("csv schema selects columns and label anywhere") {
  std::istringstream in("cls,f1,junk,f2\nx,1,9,2\ny,3,9,4\n");
  elmlc::CsvSchema schema{{"f2", "f1"}, "cls"};
  const auto ds = elmlc::parse_csv(in, schema);
  CHECK(ds.features == (Matrix{{2, 1}, {4, 3}}));
  CHECK(ds.feature_names == std::vector<std::string>{"f2", "f1"});
}

TEST_CASE("csv errors carry row and column") {
  std::istringstream bad("f1,f2,label\n1,2,a\n3,oops,b\n");
  try {
    elmlc::parse_csv(bad);
    FAIL("expected ParseError");
  } catch (const elmlc::ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 2);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(elmlc::parse_csv(empty), elmlc::ParseError);
  std::istringstream nolabel("f1,f2\n1,2\n");
  CHECK_THROWS_AS(elmlc::parse_csv(nolabel), elmlc::ParseError);
  std::istringstream ragged("f1,f2,label\n1,2\n");
  CHECK_THROWS_AS(elmlc::parse_csv(ragged), elmlc::ParseError);
  std::istringstream nan("f1,f2,label\n1,nan,a\n2,3,b\n");
  CHECK_THROWS_AS(elmlc::parse_csv(nan), elmlc::ParseError);
  CHECK_THROWS_AS(elmlc::load_csv("/nonexistent/file.csv"), elmlc::IoError);
}

TEST_CASE("feature csv ignores an optional label column") {
  std::istringstream with("a,b,label\n1,2,x\n");
  const auto t1 = elmlc::parse_feature_csv(with);
  CHECK(t1.features == Matrix{{1, 2}});
  std::istringstream without("a,b\n1,2\n3,4\n");
  const auto t2 = elmlc::parse_feature_csv(without);
  CHECK(t2.features.rows() == 2);
  CHECK(t2.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("csv round trip is exact") {
  auto ds = canonical(make_dataset({7, 5, 9}, 4));
  ds.features(0, 0) = 0.1 + 0.2;
  ds.features(1, 1) = 1e-300;
  ds.features(2, 2) = -123456789.123456789;
  std::ostringstream out;
  elmlc::write_csv(ds, out);
  std::istringstream in(out.str());
  CHECK(elmlc::parse_csv(in) == ds);

  const auto path = std::filesystem::temp_directory_path() / "elmlc_test_roundtrip.csv";
  elmlc::save_csv(ds, path);
  CHECK(elmlc::load_csv(path) == ds);
  std::filesystem::remove(path);
}

TEST_CASE("stratified split with exact proportions") {
  const auto ds = make_dataset({60, 40}, 1);
  const auto s = elmlc::stratified_split(ds, elmlc::SplitSpec{0.5, 3});
  CHECK(elmlc::class_counts(s.train) == std::vector<std::size_t>{30, 20});
  CHECK(elmlc::class_counts(s.test) == std::vector<std::size_t>{30, 20});
}

TEST_CASE("degenerate fractions and counts are rejected") {
  const auto ds = make_dataset({10, 10}, 1);
  CHECK_THROWS_AS(elmlc::stratified_split(ds, elmlc::SplitSpec{1.0, 1}), elmlc::ConfigError);
  CHECK_THROWS_AS(elmlc::stratified_split(ds, elmlc::SplitSpec{0.0, 1}), elmlc::ConfigError);
  CHECK_THROWS_AS(
      elmlc::stratified_split(ds, elmlc::SplitSpec{std::vector<std::size_t>{11, 2}, 1}),
      elmlc::ConfigError);
  CHECK_THROWS_AS(
      elmlc::stratified_split(ds, elmlc::SplitSpec{std::vector<std::size_t>{10, 10}, 1}),
      elmlc::ConfigError);
  const auto single = make_dataset({1, 10}, 1);
  CHECK_THROWS_AS(elmlc::stratified_split(single, elmlc::SplitSpec{0.5, 1}), elmlc::ConfigError);
}

TEST_CASE("split determinism per seed") {
  const auto ds = make_dataset({50, 30, 20}, 2);
  const auto a = elmlc::stratified_split(ds, elmlc::SplitSpec{0.4, 7});
  const auto b = elmlc::stratified_split(ds, elmlc::SplitSpec{0.4, 7});
  const auto c = elmlc::stratified_split(ds, elmlc::SplitSpec{0.4, 8});
  CHECK(a.train_indices == b.train_indices);
  CHECK(a.test_indices == b.test_indices);
  CHECK(a.train_indices != c.train_indices);
  CHECK(elmlc::class_counts(a.train) == elmlc::class_counts(c.train));
}

TEST_CASE("split properties over random specs") {
  elmlc::Rng rng(77);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::size_t> sizes(2 + rng.below(5));
    for (auto& s : sizes) s = 2 + rng.below(40);
    const auto ds = make_dataset(sizes, 100 + t);
    const double f = 0.05 + 0.9 * rng.uniform();
    const auto s = elmlc::stratified_split(ds, elmlc::SplitSpec{f, rng.below(1000)});
    std::vector<std::size_t> all = s.train_indices;
    all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(ds.size());
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
    CHECK(std::is_sorted(s.train_indices.begin(), s.train_indices.end()));

    const std::size_t n = ds.size();
    const auto counts = elmlc::class_counts(s.train);
    std::size_t total = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      const auto lo = static_cast<std::size_t>(std::floor(static_cast<double>(sizes[c]) * f + 1e-9));
      CHECK(counts[c] >= lo);
      CHECK(counts[c] <= lo + 1);
      total += counts[c];
    }
    CHECK(total == static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9)));
  }
}

TEST_CASE("split subsets carry the right rows") {
  const auto ds = make_dataset({8, 8}, 3);
  const auto s = elmlc::stratified_split(ds, elmlc::SplitSpec{std::vector<std::size_t>{3, 5}, 1});
  for (std::size_t i = 0; i < s.train_indices.size(); ++i) {
    const auto src = s.train_indices[i];
    CHECK(s.train.labels[i] == ds.labels[src]);
    CHECK(s.train.features(i, 2) == ds.features(src, 2));
  }
}

TEST_CASE("scaling examples") {
  const Matrix train{{0, 5}, {255, 5}};
  const auto p = elmlc::fit_scaling(train);
  const Matrix s = elmlc::apply_scaling(train, p);
  CHECK(s == (Matrix{{-1, 0}, {1, 0}}));
  const Matrix t = elmlc::apply_scaling(Matrix{{300, 5}}, p);
  CHECK(t(0, 0) == doctest::Approx(2.0 * 300.0 / 255.0 - 1.0).epsilon(1e-15));
  CHECK(t(0, 0) == doctest::Approx(1.353).epsilon(1e-3));
  const auto s3 = elmlc::apply_scaling(Matrix{{5}, {5}, {5}}, elmlc::fit_scaling(Matrix{{5}, {5}, {5}}));
  CHECK(s3 == Matrix(3, 1, 0.0));
  CHECK_THROWS_AS(elmlc::apply_scaling(Matrix(1, 3), p), elmlc::DimensionError);
}

TEST_CASE("refitting scaling on scaled training data changes nothing") {
  const auto ds = make_dataset({20, 20}, 5);
  const auto once = elmlc::apply_scaling(ds, elmlc::fit_scaling(ds));
  const auto twice = elmlc::apply_scaling(once, elmlc::fit_scaling(once));
  CHECK(oracle::naive_frobenius(once.features - twice.features) < 1e-14);
}

TEST_CASE("class unification merges name tables") {
  std::istringstream a_in("f,label\n1,x\n2,y\n");
  std::istringstream b_in("f,label\n1,z\n2,x\n3,z\n");
  elmlc::CsvSchema schema;
  auto a = elmlc::parse_csv(a_in);
  // A single-class file is legal input for the test side; unify before validating.
  std::istringstream c_in("f,label\n1,y\n2,x\n");
  auto b = elmlc::parse_csv(c_in);
  elmlc::unify_classes(a, b);
  CHECK(a.class_names == std::vector<std::string>{"x", "y"});
  CHECK(b.labels == std::vector<elmlc::Label>{1, 0});
  auto d = elmlc::parse_csv(b_in);
  elmlc::unify_classes(a, d);
  CHECK(a.class_names == std::vector<std::string>{"x", "y", "z"});
  CHECK(d.labels == std::vector<elmlc::Label>{2, 0, 2});
}

TEST_CASE("fingerprint tracks content") {
  const auto ds = make_dataset({5, 5}, 6);
  auto other = ds;
  CHECK(elmlc::fingerprint(ds) == elmlc::fingerprint(other));
  other.features(0, 0) += 1.0;
  CHECK(elmlc::fingerprint(ds) != elmlc::fingerprint(other));
}

TEST_CASE("default synthetic configuration") {
  const auto cfg = elmlc::littleport_like_config();
  CHECK(cfg.classes.size() == 7);
  CHECK(cfg.feature_names.size() == 6);
  const auto ds = elmlc::generate_synthetic(cfg);
  CHECK(ds.size() == 4737);
  const auto s = elmlc::stratified_split(ds, elmlc::bundled_split(cfg));
  CHECK(s.train.size() == 2700);
  CHECK(s.test.size() == 2037);
  CHECK(elmlc::generate_synthetic(cfg) == ds);
  CHECK_FALSE(elmlc::generate_synthetic(elmlc::littleport_like_config(43)) == ds);
}

TEST_CASE("synthetic class statistics follow the configuration") {
  elmlc::SyntheticConfig cfg;
  cfg.feature_names = {"a", "b"};
  for (int k = 0; k < 2; ++k) {
    elmlc::SyntheticClass c;
    c.name = "k" + std::to_string(k);
    c.mean = {10.0 * k, -5.0};
    c.covariance = Matrix{{4, 1.2}, {1.2, 1}};
    c.count = 20000;
    c.train_count = 100;
    cfg.classes.push_back(c);
  }
  const auto ds = elmlc::generate_synthetic(cfg);
  double m0 = 0, m1 = 0, v0 = 0, c01 = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] != 1) continue;
    m0 += ds.features(i, 0);
    m1 += ds.features(i, 1);
    ++n;
  }
  m0 /= n;
  m1 /= n;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] != 1) continue;
    v0 += (ds.features(i, 0) - m0) * (ds.features(i, 0) - m0);
    c01 += (ds.features(i, 0) - m0) * (ds.features(i, 1) - m1);
  }
  CHECK(m0 == doctest::Approx(10.0).epsilon(0.01));
  CHECK(m1 == doctest::Approx(-5.0).epsilon(0.01));
  CHECK(v0 / n == doctest::Approx(4.0).epsilon(0.05));
  CHECK(c01 / n == doctest::Approx(1.2).epsilon(0.08));

  cfg.classes[0].covariance = Matrix{{1, 2}, {2, 1}};
  CHECK_THROWS_AS(elmlc::generate_synthetic(cfg), elmlc::NumericalError);
}

TEST_CASE("synthetic config text round trip") {
  const auto cfg = elmlc::littleport_like_config(9);
  std::ostringstream out;
  elmlc::write_synthetic_config(cfg, out);
  std::istringstream in(out.str());
  const auto back = elmlc::parse_synthetic_config(in);
  CHECK(elmlc::generate_synthetic(back) == elmlc::generate_synthetic(cfg));
  std::istringstream broken("seed = 1\nfeatures = a\n");
  CHECK_THROWS_AS(elmlc::parse_synthetic_config(broken), elmlc::ParseError);
}
