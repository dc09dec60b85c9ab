#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elmlc/dataset.hpp"
#include "elmlc/elm.hpp"
#include "elmlc/error.hpp"
#include "elmlc/model_io.hpp"
#include "elmlc/synthetic.hpp"
#include "oracles.hpp"

using elmlc::Matrix;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

elmlc::SyntheticConfig two_gaussians(double separation, std::size_t count, std::uint64_t seed) {
  elmlc::SyntheticConfig cfg;
  cfg.feature_names = {"f0", "f1"};
  cfg.seed = seed;
  for (int k = 0; k < 2; ++k) {
    elmlc::SyntheticClass c;
    c.name = k == 0 ? "a" : "b";
    c.mean = {k * separation, 0.0};
    c.covariance = Matrix::identity(2);
    c.count = count;
    c.train_count = count / 2;
    cfg.classes.push_back(c);
  }
  return cfg;
}

}  // namespace

TEST_CASE("activations stay in range and saturate") {
  using elmlc::Activation;
  CHECK(elmlc::activate(Activation::sigmoid, 0.0) == 0.5);
  for (double z : {-1e308, -800.0, -5.0, 0.3, 40.0, 800.0, 1e308}) {
    const double s = elmlc::activate(Activation::sigmoid, z);
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    const double t = elmlc::activate(Activation::tanh, z);
    CHECK(t >= -1.0);
    CHECK(t <= 1.0);
    const double h = elmlc::activate(Activation::hardlimit, z);
    CHECK((h == 0.0 || h == 1.0));
  }
  CHECK(elmlc::parse_activation("tanh") == Activation::tanh);
  CHECK(elmlc::to_string(Activation::hardlimit) == "hardlimit");
  CHECK_THROWS_AS(elmlc::parse_activation("relu"), elmlc::ConfigError);
}

TEST_CASE("random layer is deterministic") {
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 3;
  cfg.rng_seed = 42;
  const auto a = elmlc::init_random_layer(cfg, 2);
  const auto b = elmlc::init_random_layer(cfg, 2);
  CHECK(a.weights == b.weights);
  CHECK(a.biases == b.biases);
  CHECK(a.weights.rows() == 3);
  CHECK(a.weights.cols() == 2);
  CHECK(a.biases.size() == 3);
  cfg.rng_seed = 43;
  CHECK_FALSE(elmlc::init_random_layer(cfg, 2).weights == a.weights);
}

TEST_CASE("degenerate weight interval gives zeros") {
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 4;
  cfg.weight_range = {0.0, 0.0};
  const auto l = elmlc::init_random_layer(cfg, 3);
  CHECK(l.weights == Matrix(4, 3));
  CHECK(std::all_of(l.biases.begin(), l.biases.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("random layer entries look uniform on [-1,1]") {
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 200;
  cfg.rng_seed = 42;
  const auto l = elmlc::init_random_layer(cfg, 6);
  double sum = 0.0;
  std::size_t n = 0;
  for (double w : l.weights.data()) {
    CHECK(w >= -1.0);
    CHECK(w <= 1.0);
    sum += w;
    ++n;
  }
  for (double c : l.biases) {
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    sum += c;
    ++n;
  }
  CHECK(std::abs(sum / static_cast<double>(n)) < 0.05);
}

TEST_CASE("hidden matrix examples") {
  const std::vector<double> zeros(3, 0.0);
  const Matrix a = elmlc::build_hidden_matrix(Matrix(3, 2), zeros, Matrix(4, 2, 7.0),
                                              elmlc::Activation::sigmoid);
  CHECK(a == Matrix(4, 3, 0.5));
  const std::vector<double> c0{0.0};
  CHECK(elmlc::build_hidden_matrix(Matrix{{1}}, c0, Matrix{{0}}, elmlc::Activation::sigmoid) ==
        Matrix{{0.5}});
  CHECK_THROWS_AS(elmlc::build_hidden_matrix(Matrix(3, 2), zeros, Matrix(4, 3),
                                             elmlc::Activation::sigmoid),
                  elmlc::DimensionError);
}

TEST_CASE("hidden matrix matches scalar oracle") {
  elmlc::Rng rng(8);
  const Matrix w = oracle::random_matrix(3, 2, rng);
  const std::vector<double> c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const Matrix x = oracle::random_matrix(5, 2, rng, -2, 2);
  const Matrix got = elmlc::build_hidden_matrix(w, c, x, elmlc::Activation::sigmoid);
  const Matrix want = oracle::scalar_hidden(w, c, x);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got(j, i) - want(j, i)) < 1e-14);
}

TEST_CASE("one-hot targets") {
  const std::vector<elmlc::Label> l1{0};
  CHECK(elmlc::encode_targets(l1, 3) == Matrix{{1, 0, 0}});
  const std::vector<elmlc::Label> l2{2, 0};
  CHECK(elmlc::encode_targets(l2, 3) == (Matrix{{0, 0, 1}, {1, 0, 0}}));
  const std::vector<elmlc::Label> l3{0, 1, 2, 3, 4, 5, 6};
  CHECK(elmlc::encode_targets(l3, 7) == Matrix::identity(7));
  const std::vector<elmlc::Label> bad{3};
  CHECK_THROWS_AS(elmlc::encode_targets(bad, 3), elmlc::ConfigError);
}

TEST_CASE("training cost examples") {
  const Matrix y{{1, 0}, {0, 1}};
  CHECK(elmlc::training_cost(Matrix::identity(2), y, y) == 0.0);
  CHECK(elmlc::training_cost(Matrix::identity(2), Matrix{{0}, {0}}, Matrix{{1}, {1}}) == 2.0);
  elmlc::Rng rng(4);
  const Matrix a = oracle::random_matrix(6, 4, rng);
  const Matrix alpha = oracle::random_matrix(4, 3, rng);
  const Matrix t = oracle::random_matrix(6, 3, rng);
  CHECK(std::abs(elmlc::training_cost(a, alpha, t) - oracle::scalar_cost(a, alpha, t)) < 1e-12);
  CHECK_THROWS_AS(elmlc::training_cost(a, alpha, Matrix(6, 2)), elmlc::DimensionError);
}

TEST_CASE("xor is fit exactly with four hidden nodes") {
  const Matrix x{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::vector<elmlc::Label> y{0, 1, 1, 0};
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 4;
  cfg.rng_seed = 7;
  const auto model = elmlc::train_elm(x, y, 2, cfg);
  const Matrix a = model.hidden(x);
  const Matrix want_a = oracle::scalar_hidden(model.input_weights(), model.biases(),
                                              elmlc::apply_scaling(x, model.scaling()));
  CHECK(oracle::naive_frobenius(a - want_a) < 1e-14);
  CHECK(oracle::scalar_cost(a, model.output_weights(), elmlc::encode_targets(y, 2)) < 1e-12);
  CHECK(elmlc::predict(model, x) == y);
}

TEST_CASE("K = H gives an exact fit and reproduces labels") {
  elmlc::Rng rng(99);
  const Matrix x = oracle::random_matrix(10, 3, rng);
  std::vector<elmlc::Label> y(10);
  for (auto& l : y) l = static_cast<elmlc::Label>(rng.below(2));
  y[0] = 0;
  y[1] = 1;
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 10;
  const auto model = elmlc::train_elm(x, y, 2, cfg);
  const double cost =
      elmlc::training_cost(model.hidden(x), model.output_weights(), elmlc::encode_targets(y, 2));
  CHECK(cost < 1e-10);
  CHECK(elmlc::predict(model, x) == y);
}

TEST_CASE("trained output weights beat random alternatives") {
  elmlc::Rng rng(5);
  const Matrix x = oracle::random_matrix(40, 4, rng);
  std::vector<elmlc::Label> y(40);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<elmlc::Label>(i % 3);
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 12;
  const auto model = elmlc::train_elm(x, y, 3, cfg);
  const Matrix a = model.hidden(x);
  const Matrix t = elmlc::encode_targets(y, 3);
  const double best = elmlc::training_cost(a, model.output_weights(), t);
  for (int i = 0; i < 100; ++i) {
    const double scale = (i % 2 == 0) ? 1e-3 : 1.0;
    const Matrix beta = model.output_weights() + scale * oracle::random_matrix(12, 3, rng);
    CHECK(best <= elmlc::training_cost(a, beta, t) + 1e-8);
  }
}

TEST_CASE("training is deterministic down to the serialized bytes") {
  elmlc::Rng rng(6);
  const Matrix x = oracle::random_matrix(50, 3, rng, 0, 255);
  std::vector<elmlc::Label> y(50);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<elmlc::Label>(i % 2);
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 20;
  const auto m1 = elmlc::train_elm(x, y, 2, cfg);
  const auto m2 = elmlc::train_elm(x, y, 2, cfg);
  const elmlc::ModelInfo info{{"a", "b"}, {"x", "y", "z"}};
  std::ostringstream s1, s2;
  elmlc::write_model(m1, info, s1);
  elmlc::write_model(m2, info, s2);
  CHECK(s1.str() == s2.str());
  CHECK(elmlc::predict(m1, x) == elmlc::predict(m2, x));
}

TEST_CASE("predict decodes by argmax with low-index ties") {
  const elmlc::ScalingParams sp{{0.0, 0.0}, {1.0, 1.0}};
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 2;
  const auto layer = elmlc::init_random_layer(cfg, 2);
  const elmlc::ElmModel zero(cfg, layer, Matrix(2, 3), sp);
  const auto p = elmlc::predict(zero, Matrix{{0.1, 0.9}, {0.5, 0.5}});
  CHECK(p == std::vector<elmlc::Label>{0, 0});
  CHECK(elmlc::argmax_decode(Matrix{{0.2, 0.9}}) == std::vector<elmlc::Label>{1});
  CHECK_THROWS_AS(elmlc::predict(zero, Matrix(1, 3)), elmlc::DimensionError);
}

TEST_CASE("argmax is invariant under increasing transforms") {
  elmlc::Rng rng(14);
  const Matrix s = oracle::random_matrix(100, 5, rng, -3, 3);
  Matrix t = s;
  for (double& v : t.data()) v = std::exp(2.0 * v) + 7.0;
  Matrix u = s;
  for (double& v : u.data()) v = std::atan(v) * 3.0 - 1.0;
  const auto base = elmlc::argmax_decode(s);
  CHECK(elmlc::argmax_decode(t) == base);
  CHECK(elmlc::argmax_decode(u) == base);
}

TEST_CASE("absent classes get a zero output column") {
  const Matrix x{{0, 1}, {1, 0}, {1, 1}};
  const std::vector<elmlc::Label> y{0, 0, 1};
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 3;
  const auto model = elmlc::train_elm(x, y, 3, cfg);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(model.output_weights()(i, 2)) < 1e-12);
}

TEST_CASE("more hidden nodes lower the median training cost") {
  auto cfg = elmlc::littleport_like_config(3);
  for (auto& c : cfg.classes) {
    c.count = 30;
    c.train_count = 15;
  }
  const auto ds = elmlc::generate_synthetic(cfg);
  const Matrix t = elmlc::encode_targets(ds.labels, ds.class_count());
  auto cost_at = [&](std::size_t h, std::uint64_t seed) {
    elmlc::ElmConfig ec;
    ec.hidden_nodes = h;
    ec.rng_seed = seed;
    const auto m = elmlc::train_elm(ds.features, ds.labels, ds.class_count(), ec);
    return elmlc::training_cost(m.hidden(ds.features), m.output_weights(), t);
  };
  std::vector<double> c10, c50;
  for (std::uint64_t s = 0; s < 11; ++s) {
    c10.push_back(cost_at(10, s));
    c50.push_back(cost_at(50, s));
  }
  CHECK(median(c50) <= median(c10));
}

TEST_CASE("indistinguishable classes give chance accuracy") {
  const auto ds = elmlc::generate_synthetic(two_gaussians(0.0, 2000, 17));
  const auto split = elmlc::stratified_split(ds, elmlc::SplitSpec{0.5, 17});
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 20;
  const auto m = elmlc::train_elm(split.train.features, split.train.labels, 2, cfg);
  const auto p = elmlc::predict(m, split.test.features);
  const double acc = 100.0 * static_cast<double>(oracle::count_matches(p, split.test.labels)) /
                     static_cast<double>(p.size());
  CHECK(acc == doctest::Approx(50.0).epsilon(0.1));
}

TEST_CASE("well separated classes are classified almost perfectly") {
  const auto ds = elmlc::generate_synthetic(two_gaussians(10.0, 1000, 18));
  const auto split = elmlc::stratified_split(ds, elmlc::SplitSpec{0.5, 18});
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 20;
  const auto m = elmlc::train_elm(split.train.features, split.train.labels, 2, cfg);
  const auto p = elmlc::predict(m, split.test.features);
  CHECK(static_cast<double>(oracle::count_matches(p, split.test.labels)) >
        0.99 * static_cast<double>(p.size()));
}

TEST_CASE("config validation") {
  elmlc::ElmConfig cfg;
  cfg.hidden_nodes = 0;
  CHECK_THROWS_AS(cfg.validate(), elmlc::ConfigError);
  cfg = {};
  cfg.weight_range = {1.0, -1.0};
  CHECK_THROWS_AS(cfg.validate(), elmlc::ConfigError);
  cfg = {};
  cfg.rank_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), elmlc::ConfigError);
  const std::vector<elmlc::Label> one{0, 0};
  CHECK_THROWS_AS(elmlc::train_elm(Matrix(2, 2), one, 1, elmlc::ElmConfig{}), elmlc::ConfigError);
  CHECK_THROWS_AS(elmlc::train_elm(Matrix(3, 2), one, 2, elmlc::ElmConfig{}),
                  elmlc::DimensionError);
}
