#ifndef ELMLC_MATRIX_HPP
#define ELMLC_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace elmlc {

/// Dense row-major matrix of doubles.
///
/// A sized matrix always has rows >= 1 and cols >= 1. The default-constructed
/// matrix is the empty 0x0 placeholder and is rejected by every operation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

Matrix matmul(const Matrix& a, const Matrix& b);
/// a * b^T without materializing the transpose.
Matrix matmul_transposed(const Matrix& a, const Matrix& b);
/// a^T * b without materializing the transpose.
Matrix transposed_matmul(const Matrix& a, const Matrix& b);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double frobenius_norm(const Matrix& a);
double dot(std::span<const double> x, std::span<const double> y);

/// Lower-triangular L with L L^T = a. Throws NumericalError when `a` is not
/// symmetric positive definite.
Matrix cholesky(const Matrix& a);

/// Thin singular value decomposition a = u * diag(s) * v^T, r = min(rows, cols).
struct SvdFactors {
  Matrix u;                             // rows x r, orthonormal columns
  std::vector<double> singular_values;  // non-increasing, >= 0
  Matrix v;                             // cols x r, orthonormal columns
};

struct SvdOptions {
  /// Jacobi sweep cap; 0 selects 100 * min(rows, cols).
  std::size_t max_sweeps = 0;
};

inline constexpr double kDefaultRankTol = 1e-10;

/// One-sided Jacobi SVD on the triangular factor of a column-pivoted QR.
///
/// Singular vectors are sign-normalized so that the first nonzero entry of
/// every column of u is positive, which makes the result a deterministic
/// function of the input. Throws NumericalError on non-finite input or when
/// the sweep cap is exhausted.
SvdFactors svd(const Matrix& a, const SvdOptions& options = {});

/// Moore-Penrose inverse v * diag(1/s_i) * u^T, keeping only s_i > rank_tol * s_1.
/// The all-zero matrix maps to the all-zero cols x rows matrix.
Matrix pseudoinverse(const Matrix& a, double rank_tol = kDefaultRankTol);

/// Minimum-Frobenius-norm minimizer of ||a x - y||_F, i.e. pseudoinverse(a) * y,
/// evaluated without forming the pseudoinverse.
Matrix min_norm_lstsq(const Matrix& a, const Matrix& y, double rank_tol = kDefaultRankTol);

}  // namespace elmlc

#endif  // ELMLC_MATRIX_HPP
