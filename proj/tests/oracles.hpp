// Independent reference computations used only by tests. Nothing here calls
// the library's numerical routines it is meant to check.
#ifndef ELMLC_TESTS_ORACLES_HPP
#define ELMLC_TESTS_ORACLES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "elmlc/labels.hpp"
#include "elmlc/matrix.hpp"
#include "elmlc/mlp.hpp"
#include "elmlc/random.hpp"

namespace oracle {

using elmlc::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, elmlc::Rng& rng, double lo = -1.0,
                     double hi = 1.0);
/// rows x cols matrix of rank <= rank, built as a product of random factors.
Matrix random_low_rank(std::size_t rows, std::size_t cols, std::size_t rank, elmlc::Rng& rng);

Matrix naive_matmul(const Matrix& a, const Matrix& b);
Matrix naive_transpose(const Matrix& a);
double naive_frobenius(const Matrix& a);

/// Gauss-Jordan elimination with partial pivoting; solves a X = b.
Matrix gauss_solve(const Matrix& a, const Matrix& b);
Matrix gauss_inverse(const Matrix& a);
/// (A^T A)^{-1} A^T for full-column-rank A.
Matrix normal_equations_pinv(const Matrix& a);

/// Orthonormal basis (as columns) of the null space of a, from Gram-Schmidt on
/// the complement of the row space. Uses only elementary operations.
Matrix null_space_basis(const Matrix& a, double tol = 1e-9);

double scalar_sigmoid(double z);
/// f(w_i . x_j + c_i) one entry at a time.
Matrix scalar_hidden(const Matrix& w, std::span<const double> c, const Matrix& x);
/// Double-loop sum of squared residuals of a alpha - y.
double scalar_cost(const Matrix& a, const Matrix& alpha, const Matrix& y);

/// Scalar re-implementation of the two-layer sigmoid network's summed squared error.
double scalar_mlp_cost(const elmlc::MlpParams& p, const Matrix& x, const Matrix& y);
/// Central differences of scalar_mlp_cost for every parameter.
elmlc::MlpParams finite_difference_gradient(const elmlc::MlpParams& p, const Matrix& x,
                                            const Matrix& y, double step);

std::size_t count_matches(std::span<const elmlc::Label> a, std::span<const elmlc::Label> b);

}  // namespace oracle

#endif  // ELMLC_TESTS_ORACLES_HPP
