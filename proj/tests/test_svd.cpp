#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "elmlc/error.hpp"
#include "elmlc/matrix.hpp"
#include "oracles.hpp"

using elmlc::Matrix;

namespace {

Matrix gram(const Matrix& q) { return oracle::naive_matmul(oracle::naive_transpose(q), q); }

double off_identity(const Matrix& g) {
  return oracle::naive_frobenius(g - Matrix::identity(g.rows()));
}

Matrix reconstruct(const elmlc::SvdFactors& f) {
  Matrix us = f.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.singular_values[j];
  return oracle::naive_matmul(us, oracle::naive_transpose(f.v));
}

double penrose_worst(const Matrix& a, const Matrix& p) {
  const Matrix ap = oracle::naive_matmul(a, p);
  const Matrix pa = oracle::naive_matmul(p, a);
  const double e1 = oracle::naive_frobenius(oracle::naive_matmul(ap, a) - a);
  const double e2 = oracle::naive_frobenius(oracle::naive_matmul(pa, p) - p);
  const double e3 = oracle::naive_frobenius(oracle::naive_transpose(ap) - ap);
  const double e4 = oracle::naive_frobenius(oracle::naive_transpose(pa) - pa);
  return std::max({e1, e2, e3, e4}) / std::max(1.0, oracle::naive_frobenius(a));
}

}  // namespace

TEST_CASE("svd of identity") {
  const auto f = elmlc::svd(Matrix::identity(3));
  REQUIRE(f.singular_values.size() == 3);
  for (double s : f.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("svd of a signed diagonal sorts absolute values") {
  const auto f = elmlc::svd(Matrix{{3, 0}, {0, -4}});
  CHECK(f.singular_values[0] == doctest::Approx(4.0));
  CHECK(f.singular_values[1] == doctest::Approx(3.0));
  CHECK(oracle::naive_frobenius(reconstruct(f) - Matrix{{3, 0}, {0, -4}}) < 1e-14);
}

TEST_CASE("svd of random shapes is orthonormal and reconstructs") {
  elmlc::Rng rng(11);
  for (auto [r, c] : {std::pair{6, 4}, {4, 6}, {1, 5}, {5, 1}, {30, 30}, {50, 80}}) {
    CAPTURE(r);
    CAPTURE(c);
    const Matrix a = oracle::random_matrix(r, c, rng);
    const auto f = elmlc::svd(a);
    const std::size_t k = std::min<std::size_t>(r, c);
    REQUIRE(f.u.rows() == static_cast<std::size_t>(r));
    REQUIRE(f.u.cols() == k);
    REQUIRE(f.v.rows() == static_cast<std::size_t>(c));
    REQUIRE(f.v.cols() == k);
    CHECK(off_identity(gram(f.u)) < 1e-10);
    CHECK(off_identity(gram(f.v)) < 1e-10);
    CHECK(oracle::naive_frobenius(reconstruct(f) - a) / oracle::naive_frobenius(a) < 1e-10);
    CHECK(std::is_sorted(f.singular_values.rbegin(), f.singular_values.rend()));
    CHECK(f.singular_values.back() >= 0.0);
  }
}

TEST_CASE("svd sign convention and rank-deficient completion") {
  elmlc::Rng rng(12);
  const Matrix a = oracle::random_low_rank(9, 6, 2, rng);
  const auto f = elmlc::svd(a);
  CHECK(off_identity(gram(f.u)) < 1e-10);
  CHECK(off_identity(gram(f.v)) < 1e-10);
  CHECK(f.singular_values[2] < 1e-12 * f.singular_values[0]);
  for (std::size_t j = 0; j < f.u.cols(); ++j) {
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
      if (f.u(i, j) != 0.0) {
        CHECK(f.u(i, j) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("pseudoinverse examples") {
  CHECK(oracle::naive_frobenius(elmlc::pseudoinverse(Matrix::identity(3)) - Matrix::identity(3)) <
        1e-15);
  const Matrix z = elmlc::pseudoinverse(Matrix(2, 3));
  CHECK(z == Matrix(3, 2));
  const Matrix col{{1}, {1}};
  const Matrix p = elmlc::pseudoinverse(col);
  const Matrix want = oracle::normal_equations_pinv(col);
  REQUIRE(p.rows() == 1);
  REQUIRE(p.cols() == 2);
  CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p(0, 1) == doctest::Approx(want(0, 1)).epsilon(1e-15));
}

TEST_CASE("pseudoinverse matches normal equations for full column rank") {
  elmlc::Rng rng(21);
  const Matrix a = oracle::random_matrix(12, 5, rng);
  CHECK(oracle::naive_frobenius(elmlc::pseudoinverse(a) - oracle::normal_equations_pinv(a)) <
        1e-10);
}

TEST_CASE("pseudoinverse of square invertible matrices is the inverse") {
  elmlc::Rng rng(22);
  for (int n : {2, 5, 17}) {
    const Matrix a = oracle::random_matrix(n, n, rng);
    const Matrix inv = oracle::gauss_inverse(a);
    CHECK(oracle::naive_frobenius(elmlc::pseudoinverse(a) - inv) / oracle::naive_frobenius(inv) <
          1e-8);
  }
}

TEST_CASE("penrose conditions on mixed shapes and ranks") {
  elmlc::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const std::size_t r = 1 + rng.below(40);
    const std::size_t c = 1 + rng.below(40);
    const Matrix a = (t % 2 == 0) ? oracle::random_matrix(r, c, rng)
                                  : oracle::random_low_rank(r, c, rng.below(std::min(r, c)), rng);
    CHECK(penrose_worst(a, elmlc::pseudoinverse(a)) < 1e-8);
  }
}

TEST_CASE("min_norm_lstsq examples") {
  const Matrix x = elmlc::min_norm_lstsq(Matrix::identity(2), Matrix{{1}, {2}});
  CHECK(x(0, 0) == doctest::Approx(1.0));
  CHECK(x(1, 0) == doctest::Approx(2.0));
  const Matrix u = elmlc::min_norm_lstsq(Matrix{{1, 1}}, Matrix{{2}});
  REQUIRE(u.rows() == 2);
  CHECK(u(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  // The minimum-norm point lies in the row space, so it is orthogonal to the null direction.
  CHECK(std::abs(u(0, 0) - u(1, 0)) < 1e-14);
  CHECK_THROWS_AS(elmlc::min_norm_lstsq(Matrix(3, 2), Matrix(2, 1)), elmlc::DimensionError);
}

TEST_CASE("min_norm_lstsq on a consistent tall system") {
  elmlc::Rng rng(31);
  const Matrix a = oracle::random_matrix(10, 4, rng);
  const Matrix truth = oracle::random_matrix(4, 2, rng);
  const Matrix y = oracle::naive_matmul(a, truth);
  const Matrix x = elmlc::min_norm_lstsq(a, y);
  CHECK(oracle::naive_frobenius(oracle::naive_matmul(a, x) - y) < 1e-9);
  CHECK(oracle::naive_frobenius(x - truth) < 1e-10);
}

TEST_CASE("min_norm_lstsq residual is optimal against random alternatives") {
  elmlc::Rng rng(32);
  const Matrix a = oracle::random_matrix(15, 6, rng);
  const Matrix y = oracle::random_matrix(15, 3, rng);
  const Matrix x = elmlc::min_norm_lstsq(a, y);
  const double best = oracle::naive_frobenius(oracle::naive_matmul(a, x) - y);
  for (int t = 0; t < 100; ++t) {
    const Matrix beta = oracle::random_matrix(6, 3, rng, -3.0, 3.0);
    CHECK(best <= oracle::naive_frobenius(oracle::naive_matmul(a, beta) - y) + 1e-8);
  }
}

TEST_CASE("min_norm_lstsq beats every null-space shifted solution") {
  elmlc::Rng rng(33);
  const Matrix a = oracle::random_low_rank(8, 12, 5, rng);
  const Matrix y = oracle::naive_matmul(a, oracle::random_matrix(12, 2, rng));
  const Matrix x = elmlc::min_norm_lstsq(a, y);
  const Matrix n = oracle::null_space_basis(a);
  REQUIRE(n.cols() == 7);
  const double xn = oracle::naive_frobenius(x);
  for (int t = 0; t < 20; ++t) {
    const Matrix shift = oracle::naive_matmul(n, oracle::random_matrix(n.cols(), 2, rng));
    const Matrix beta = x + shift;
    CHECK(oracle::naive_frobenius(oracle::naive_matmul(a, beta) - y) < 1e-8);
    CHECK(xn <= oracle::naive_frobenius(beta));
  }
}

TEST_CASE("repeated solves are bit-identical and agree with pinv route") {
  elmlc::Rng rng(34);
  const Matrix a = oracle::random_matrix(60, 20, rng);
  const Matrix y = oracle::random_matrix(60, 7, rng);
  const Matrix x1 = elmlc::min_norm_lstsq(a, y);
  const Matrix x2 = elmlc::min_norm_lstsq(a, y);
  CHECK(x1 == x2);
  const Matrix via_pinv = oracle::naive_matmul(elmlc::pseudoinverse(a), y);
  CHECK(oracle::naive_frobenius(x1 - via_pinv) < 1e-10);
}

TEST_CASE("svd reports non-convergence under a tiny sweep cap") {
  elmlc::Rng rng(35);
  const Matrix a = oracle::random_matrix(20, 20, rng);
  elmlc::SvdOptions opts;
  opts.max_sweeps = 1;
  CHECK_THROWS_AS(elmlc::svd(a, opts), elmlc::NumericalError);
}

TEST_CASE("non-finite input is rejected") {
  Matrix a(2, 2);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(elmlc::svd(a), elmlc::NumericalError);
}
