#include "spcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spcert/error.hpp"

namespace spcert {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidMatrix, "non-finite fill value");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::InvalidMatrix, "expected " + std::to_string(rows_ * cols_) +
                                              " entries, got " + std::to_string(data_.size()));
  }
  require_finite(*this, "matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidMatrix, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(*this, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> Matrix::col(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
  Matrix out(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < indices.size(); ++k) out(r, k) = (*this)(r, indices[k]);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t k = 0; k < indices.size(); ++k)
    for (std::size_t c = 0; c < cols_; ++c) out(k, c) = (*this)(indices[k], c);
  return out;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorCode::InvalidMatrix, std::string(what) + " has non-finite entries");
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shapes");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shapes");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return y;
}

namespace {

// Reflects rows k.. of `r` (columns from `col0`) so that column k below the
// diagonal vanishes; accumulates the reflector into the columns of `q`.
void householder_step(Matrix& r, Matrix* q, std::size_t k) {
  const std::size_t m = r.rows();
  double below = 0.0;
  for (std::size_t i = k + 1; i < m; ++i) below += r(i, k) * r(i, k);
  if (below == 0.0) return;  // already reduced; keeps Q = I on triangular input

  const double x0 = r(k, k);
  const double norm = std::sqrt(x0 * x0 + below);
  const double alpha = x0 >= 0.0 ? -norm : norm;

  std::vector<double> v(m - k);
  v[0] = x0 - alpha;
  for (std::size_t i = k + 1; i < m; ++i) v[i - k] = r(i, k);
  const double vnorm2 = v[0] * v[0] + below;

  for (std::size_t j = k; j < r.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i - k] * r(i, j);
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i - k];
  }
  r(k, k) = alpha;
  for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;

  if (q != nullptr) {
    for (std::size_t row = 0; row < q->rows(); ++row) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += (*q)(row, i) * v[i - k];
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) (*q)(row, i) -= s * v[i - k];
    }
  }
}

}  // namespace

QrFactors qr_decompose(const Matrix& m) {
  require_finite(m, "qr input");
  QrFactors f{Matrix::identity(m.rows()), m};
  const std::size_t steps = std::min(m.rows() == 0 ? 0 : m.rows() - 1, m.cols());
  for (std::size_t k = 0; k < steps; ++k) householder_step(f.r, &f.q, k);
  return f;
}

std::size_t rank(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rank tolerance must be positive");
  require_finite(m, "rank input");
  Matrix r = m;
  const std::size_t steps = std::min(r.rows(), r.cols());
  double lead = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < r.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < r.rows(); ++i) s += r(i, j) * r(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k)
      for (std::size_t i = 0; i < r.rows(); ++i) std::swap(r(i, k), r(i, best));
    householder_step(r, nullptr, k);
    if (k == 0) lead = std::abs(r(0, 0));
    if (std::abs(r(k, k)) > tol * std::max(1.0, lead)) ++count;
  }
  return count;
}

NullSpaceBasis null_space_basis(const Matrix& a, double tol) {
  require_finite(a, "measurement matrix");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m >= n) {
    throw Error(ErrorCode::NotUnderdetermined,
                "need m < n, got " + std::to_string(m) + "x" + std::to_string(n));
  }
  const std::size_t r = rank(a, tol);
  if (r < m) {
    throw Error(ErrorCode::RankDeficient,
                "rank " + std::to_string(r) + " < " + std::to_string(m) + " rows");
  }
  const QrFactors f = qr_decompose(a.transpose());
  std::vector<std::size_t> tail(n - m);
  std::iota(tail.begin(), tail.end(), m);
  return NullSpaceBasis(f.q.select_columns(tail), tol);
}

NullSpaceBasis NullSpaceBasis::from_columns(const Matrix& a, Matrix n_mat, double tol) {
  require_finite(a, "measurement matrix");
  require_finite(n_mat, "null-space basis");
  if (n_mat.rows() != a.cols() || n_mat.cols() == 0)
    throw Error(ErrorCode::DimensionMismatch, "basis must be n x p with p >= 1");
  if (a.rows() >= a.cols()) throw Error(ErrorCode::NotUnderdetermined, "need m < n");
  if (rank(a, tol) < a.rows()) throw Error(ErrorCode::RankDeficient, "A is not full row rank");
  if (n_mat.cols() != a.cols() - a.rows())
    throw Error(ErrorCode::DimensionMismatch, "basis width must equal n - rank(A)");

  if ((a * n_mat).max_abs() > 1e-9 * std::max(1.0, a.max_abs()))
    throw Error(ErrorCode::InvalidArgument, "columns are not in null(A)");
  const Matrix gram = n_mat.transpose() * n_mat;
  if ((gram - Matrix::identity(gram.rows())).max_abs() > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "columns are not orthonormal");
  return NullSpaceBasis(std::move(n_mat), tol);
}

Norms vector_norms(std::span<const double> v) {
  Norms out;
  for (double x : v) {
    out.l1 += std::abs(x);
    out.linf = std::max(out.linf, std::abs(x));
  }
  return out;
}

Norms vector_norms(const Matrix& v) {
  if (v.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "vector_norms expects one column");
  return vector_norms(v.data());
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::optional<std::vector<double>> least_squares(const Matrix& m, std::span<const double> b,
                                                 double tol) {
  if (m.rows() != b.size()) throw Error(ErrorCode::DimensionMismatch, "least_squares rhs length");
  if (m.cols() > m.rows()) throw Error(ErrorCode::DimensionMismatch, "least_squares needs rows >= cols");
  const std::size_t k = m.cols();
  if (k == 0) return std::vector<double>{};

  const QrFactors f = qr_decompose(m);
  const double lead = std::abs(f.r(0, 0));
  for (std::size_t i = 0; i < k; ++i)
    if (std::abs(f.r(i, i)) <= tol * std::max(1.0, lead)) return std::nullopt;

  // x = R^{-1} (Q^T b)[0..k)
  std::vector<double> rhs(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t r = 0; r < m.rows(); ++r) rhs[i] += f.q(r, i) * b[r];
  for (std::size_t i = k; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= f.r(i, j) * rhs[j];
    rhs[i] = s / f.r(i, i);
  }
  return rhs;
}

bool LuFactor::factorize(const Matrix& a, double pivot_tol) {
  n_ = a.rows();
  lu_.assign(a.data().begin(), a.data().end());
  perm_.resize(n_);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  auto at = [this](std::size_t r, std::size_t c) -> double& { return lu_[r * n_ + c]; };

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t piv = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        piv = i;
      }
    }
    if (best <= pivot_tol) return false;
    if (piv != k) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(at(k, c), at(piv, c));
      std::swap(perm_[k], perm_[piv]);
    }
    const double d = at(k, k);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double l = at(i, k) / d;
      at(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t c = k + 1; c < n_; ++c) at(i, c) -= l * at(k, c);
    }
  }
  return true;
}

void LuFactor::solve(std::span<double> b) const {
  // P A = L U
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
    x[i] /= lu_[i * n_ + i];
  }
  std::copy(x.begin(), x.end(), b.begin());
}

void LuFactor::solve_transpose(std::span<double> b) const {
  // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, then x = P^T w.
  std::vector<double> z(b.begin(), b.end());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) z[i] -= lu_[j * n_ + i] * z[j];
    z[i] /= lu_[i * n_ + i];
  }
  for (std::size_t i = n_; i-- > 0;)
    for (std::size_t j = i + 1; j < n_; ++j) z[i] -= lu_[j * n_ + i] * z[j];
  for (std::size_t i = 0; i < n_; ++i) b[perm_[i]] = z[i];
}

}  // namespace spcert
