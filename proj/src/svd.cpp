#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "elmlc/error.hpp"
#include "elmlc/matrix.hpp"

namespace elmlc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder QR with column pivoting, A P = Q R, for a tall (rows >= cols)
// matrix. Reflector k is stored below the diagonal of column k of `work` with
// an implicit unit leading entry.
class PivotedQr {
 public:
  explicit PivotedQr(const Matrix& a) : m_(a.rows()), n_(a.cols()), work_(m_ * n_), tau_(n_) {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) work_[j * m_ + i] = a(i, j);
    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    factor();
  }

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  const std::vector<std::size_t>& perm() const noexcept { return perm_; }
  double r(std::size_t i, std::size_t j) const noexcept { return i <= j ? col(j)[i] : 0.0; }

  // y <- Q^T y, y of length rows().
  void apply_qt(std::span<double> y) const {
    for (std::size_t k = 0; k < n_; ++k) reflect(k, y);
  }

  // z <- Q z, z of length rows().
  void apply_q(std::span<double> z) const {
    for (std::size_t k = n_; k-- > 0;) reflect(k, z);
  }

 private:
  const double* col(std::size_t j) const noexcept { return work_.data() + j * m_; }
  double* col(std::size_t j) noexcept { return work_.data() + j * m_; }

  void reflect(std::size_t k, std::span<double> y) const {
    if (tau_[k] == 0.0) return;
    const double* v = col(k);
    const std::size_t len = m_ - k - 1;
    double s = y[k] + dot({v + k + 1, len}, {y.data() + k + 1, len});
    s *= tau_[k];
    y[k] -= s;
    for (std::size_t i = k + 1; i < m_; ++i) y[i] -= s * v[i];
  }

  double tail_norm(std::size_t j, std::size_t from) const {
    const double* c = col(j);
    return std::sqrt(dot({c + from, m_ - from}, {c + from, m_ - from}));
  }

  void factor() {
    std::vector<double> norms(n_), norms_ref(n_);
    for (std::size_t j = 0; j < n_; ++j) norms[j] = norms_ref[j] = tail_norm(j, 0);
    const double recompute_tol = std::sqrt(kEps);

    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      for (std::size_t j = k + 1; j < n_; ++j)
        if (norms[j] > norms[p]) p = j;
      if (p != k) {
        std::swap_ranges(col(k), col(k) + m_, col(p));
        std::swap(norms[k], norms[p]);
        std::swap(norms_ref[k], norms_ref[p]);
        std::swap(perm_[k], perm_[p]);
      }

      double* x = col(k);
      const double alpha = x[k];
      const double xnorm = k + 1 < m_ ? tail_norm(k, k + 1) : 0.0;
      if (xnorm == 0.0) {
        tau_[k] = 0.0;
      } else {
        const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
        tau_[k] = (beta - alpha) / beta;
        const double inv = 1.0 / (alpha - beta);
        for (std::size_t i = k + 1; i < m_; ++i) x[i] *= inv;
        x[k] = beta;
      }

      if (tau_[k] != 0.0) {
        const std::size_t len = m_ - k - 1;
        for (std::size_t j = k + 1; j < n_; ++j) {
          double* w = col(j);
          double s = w[k] + dot({x + k + 1, len}, {w + k + 1, len});
          s *= tau_[k];
          w[k] -= s;
          for (std::size_t i = k + 1; i < m_; ++i) w[i] -= s * x[i];
        }
      }

      // Downdate the remaining column norms, recomputing on cancellation.
      for (std::size_t j = k + 1; j < n_; ++j) {
        if (norms[j] == 0.0) continue;
        const double ratio = std::abs(col(j)[k]) / norms[j];
        const double shrink = std::max(0.0, 1.0 - ratio * ratio);
        const double rel = norms[j] / norms_ref[j];
        if (shrink * rel * rel <= recompute_tol) {
          norms[j] = k + 1 < m_ ? tail_norm(j, k + 1) : 0.0;
          norms_ref[j] = norms[j];
        } else {
          norms[j] *= std::sqrt(shrink);
        }
      }
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> work_;
  std::vector<double> tau_;
  std::vector<std::size_t> perm_;
};

// Result of one-sided Jacobi on X = R^T where A P = Q R:
//   X * vx = [x_1 .. x_n] with mutually orthogonal columns, sigma_j = |x_j|.
// Then A = (Q vx) diag(sigma) (P xhat)^T.
struct TallCore {
  PivotedQr qr;
  std::vector<double> x;   // n x n column-major, orthogonalized columns
  std::vector<double> vx;  // n x n column-major, accumulated rotations
  std::vector<double> sigma;
};

void rotate(double* a, double* b, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i];
    const double bi = b[i];
    a[i] = c * ai - s * bi;
    b[i] = s * ai + c * bi;
  }
}

TallCore jacobi_tall(const Matrix& a, const SvdOptions& options) {
  TallCore core{PivotedQr(a), {}, {}, {}};
  const std::size_t n = a.cols();
  core.x.assign(n * n, 0.0);
  core.vx.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    core.vx[j * n + j] = 1.0;
    for (std::size_t i = j; i < n; ++i) core.x[j * n + i] = core.qr.r(j, i);
  }

  const std::size_t max_sweeps = options.max_sweeps ? options.max_sweeps : 100 * n;
  const double tol = kEps * std::sqrt(static_cast<double>(n));
  std::vector<double> norm2(n);
  bool converged = n < 2;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) {
      const double* xj = core.x.data() + j * n;
      norm2[j] = dot({xj, n}, {xj, n});
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      double* xp = core.x.data() + p * n;
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norm2[p];
        const double beta = norm2[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        double* xq = core.x.data() + q * n;
        const double gamma = dot({xp, n}, {xq, n});
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(xp, xq, n, c, s);
        rotate(core.vx.data() + p * n, core.vx.data() + q * n, n, c, s);
        norm2[p] = dot({xp, n}, {xp, n});
        norm2[q] = dot({xq, n}, {xq, n});
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw NumericalError("svd: Jacobi iteration did not converge within " +
                         std::to_string(max_sweeps) + " sweeps");
  }

  core.sigma.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* xj = core.x.data() + j * n;
    core.sigma[j] = std::sqrt(dot({xj, n}, {xj, n}));
  }
  return core;
}

// Replaces columns `fill` of q (column-major, len x cols) with unit vectors
// orthogonal to every other column, by Gram-Schmidt on coordinate vectors.
void complete_orthonormal(std::vector<double>& q, std::size_t len, std::size_t cols,
                          const std::vector<bool>& fill) {
  std::vector<bool> valid(cols);
  for (std::size_t j = 0; j < cols; ++j) valid[j] = !fill[j];
  std::size_t next_axis = 0;
  std::vector<double> cand(len);
  for (std::size_t j = 0; j < cols; ++j) {
    if (!fill[j]) continue;
    for (;; ++next_axis) {
      if (next_axis >= len) throw NumericalError("svd: cannot complete orthonormal basis");
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[next_axis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < cols; ++k) {
          if (!valid[k]) continue;
          const double* qk = q.data() + k * len;
          const double proj = dot({qk, len}, cand);
          for (std::size_t i = 0; i < len; ++i) cand[i] -= proj * qk[i];
        }
      }
      const double nrm = std::sqrt(dot(cand, cand));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < len; ++i) q[j * len + i] = cand[i] / nrm;
        valid[j] = true;
        ++next_axis;
        break;
      }
    }
  }
}

// Thin SVD of a tall matrix, sorted and sign-normalized.
SvdFactors svd_tall(const Matrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  TallCore core = jacobi_tall(a, options);

  // Right singular vectors of A: V = P * xhat, xhat_j = x_j / sigma_j.
  std::vector<double> v(n * n, 0.0);
  std::vector<bool> zero(n, false);
  const auto& perm = core.qr.perm();
  for (std::size_t j = 0; j < n; ++j) {
    const double sj = core.sigma[j];
    // Columns whose squared norm would underflow carry no direction.
    if (sj < 1e-150) {
      zero[j] = true;
      continue;
    }
    const double* xj = core.x.data() + j * n;
    for (std::size_t k = 0; k < n; ++k) v[j * n + perm[k]] = xj[k] / sj;
  }
  if (std::find(zero.begin(), zero.end(), true) != zero.end()) {
    complete_orthonormal(v, n, n, zero);
  }

  // Left singular vectors: U = Q * [vx; 0].
  std::vector<double> u(m * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::span<double> uj(u.data() + j * m, m);
    std::copy_n(core.vx.data() + j * n, n, uj.begin());
    core.qr.apply_q(uj);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return core.sigma[i] > core.sigma[j];
  });

  SvdFactors f{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    const double* uj = u.data() + j * m;
    const double* vj = v.data() + j * n;
    double sign = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (uj[i] != 0.0) {
        sign = uj[i] < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    f.singular_values[jj] = core.sigma[j];
    for (std::size_t i = 0; i < m; ++i) f.u(i, jj) = sign * uj[i];
    for (std::size_t i = 0; i < n; ++i) f.v(i, jj) = sign * vj[i];
  }
  return f;
}

void require_input(const Matrix& a, std::string_view what) {
  if (a.empty()) throw DimensionError(std::string(what) + ": empty matrix");
  require_finite(a, what);
}

}  // namespace

SvdFactors svd(const Matrix& a, const SvdOptions& options) {
  require_input(a, "svd");
  if (a.rows() >= a.cols()) return svd_tall(a, options);

  // Wide input: factor the transpose and swap roles. The sign convention is
  // re-applied to the new u.
  SvdFactors t = svd_tall(a.transpose(), options);
  SvdFactors f{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
  for (std::size_t j = 0; j < f.u.cols(); ++j) {
    double sign = 1.0;
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
      if (f.u(i, j) != 0.0) {
        sign = f.u(i, j) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    if (sign < 0.0) {
      for (std::size_t i = 0; i < f.u.rows(); ++i) f.u(i, j) = -f.u(i, j);
      for (std::size_t i = 0; i < f.v.rows(); ++i) f.v(i, j) = -f.v(i, j);
    }
  }
  return f;
}

Matrix pseudoinverse(const Matrix& a, double rank_tol) {
  if (!(rank_tol >= 0.0)) throw ConfigError("pseudoinverse: rank_tol must be >= 0");
  const SvdFactors f = svd(a, {});
  Matrix p(a.cols(), a.rows());
  const double cutoff = f.singular_values.empty() ? 0.0 : rank_tol * f.singular_values[0];
  for (std::size_t k = 0; k < f.singular_values.size(); ++k) {
    const double s = f.singular_values[k];
    if (!(s > cutoff) || s == 0.0) continue;
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < p.rows(); ++i) {
      const double vik = f.v(i, k) * inv;
      if (vik == 0.0) continue;
      auto out = p.row(i);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += vik * f.u(j, k);
    }
  }
  return p;
}

Matrix min_norm_lstsq(const Matrix& a, const Matrix& y, double rank_tol) {
  require_input(a, "min_norm_lstsq");
  require_input(y, "min_norm_lstsq");
  if (!(rank_tol >= 0.0)) throw ConfigError("min_norm_lstsq: rank_tol must be >= 0");
  if (a.rows() != y.rows()) {
    throw DimensionError("min_norm_lstsq: A has " + std::to_string(a.rows()) +
                         " rows but Y has " + std::to_string(y.rows()));
  }
  const std::size_t n = a.cols();
  const std::size_t k_out = y.cols();

  if (a.rows() < a.cols()) {
    // Wide systems are small in this library's use; go through the factors.
    const SvdFactors f = svd(a, {});
    const Matrix uty = transposed_matmul(f.u, y);
    Matrix scaled(uty.rows(), k_out);
    const double cutoff = rank_tol * f.singular_values[0];
    for (std::size_t i = 0; i < uty.rows(); ++i) {
      const double s = f.singular_values[i];
      if (!(s > cutoff) || s == 0.0) continue;
      for (std::size_t j = 0; j < k_out; ++j) scaled(i, j) = uty(i, j) / s;
    }
    return matmul(f.v, scaled);
  }

  // Tall: U^T Y = vx^T (Q^T Y)[0:n], then alpha = P xhat diag(1/sigma) (U^T Y).
  const TallCore core = jacobi_tall(a, {});
  const std::size_t m = a.rows();
  double smax = 0.0;
  for (double s : core.sigma) smax = std::max(smax, s);
  const double cutoff = rank_tol * smax;

  Matrix qty(n, k_out);
  std::vector<double> col(m);
  for (std::size_t j = 0; j < k_out; ++j) {
    for (std::size_t i = 0; i < m; ++i) col[i] = y(i, j);
    core.qr.apply_qt(col);
    for (std::size_t i = 0; i < n; ++i) qty(i, j) = col[i];
  }

  const auto& perm = core.qr.perm();
  Matrix alpha(n, k_out);
  std::vector<double> coef(k_out);
  for (std::size_t c = 0; c < n; ++c) {
    const double s = core.sigma[c];
    if (!(s > cutoff) || s == 0.0) continue;
    // xhat_c = x_c / s, so both factors of 1/s are folded into coef.
    const double* vc = core.vx.data() + c * n;
    for (std::size_t j = 0; j < k_out; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += vc[i] * qty(i, j);
      coef[j] = acc / (s * s);
    }
    const double* xc = core.x.data() + c * n;
    for (std::size_t k = 0; k < n; ++k) {
      auto out = alpha.row(perm[k]);
      const double xk = xc[k];
      for (std::size_t j = 0; j < k_out; ++j) out[j] += xk * coef[j];
    }
  }
  require_finite(alpha, "min_norm_lstsq");
  return alpha;
}

}  // namespace elmlc
