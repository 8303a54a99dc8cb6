#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace spcert {

/// Dense real matrix, row-major. Vectors are matrices with one column.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws InvalidMatrix if data.size() != rows*cols or any entry is non-finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> col(std::size_t c) const;

  Matrix transpose() const;
  /// Columns listed in `indices`, in that order.
  Matrix select_columns(std::span<const std::size_t> indices) const;
  Matrix select_rows(std::span<const std::size_t> indices) const;

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Throws InvalidMatrix when any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

struct QrFactors {
  Matrix q;  // rows x rows, orthogonal
  Matrix r;  // rows x cols, upper trapezoidal
};

/// Householder QR without pivoting.
QrFactors qr_decompose(const Matrix& m);

inline constexpr double kDefaultRankTol = 1e-10;

/// Count of |R_kk| above tol * max(1, |R_11|) from QR with column pivoting.
std::size_t rank(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis of null(A), stored as the n x p matrix `n_mat`.
class NullSpaceBasis {
 public:
  /// Wraps caller-supplied orthonormal columns spanning null(A); validates
  /// A*N ~ 0, N^T N ~ I, and p = n - rank(A).
  static NullSpaceBasis from_columns(const Matrix& a, Matrix n_mat, double tol = kDefaultRankTol);

  std::size_t n() const noexcept { return basis_.rows(); }
  std::size_t p() const noexcept { return basis_.cols(); }
  const Matrix& matrix() const noexcept { return basis_; }
  double source_tol() const noexcept { return source_tol_; }

  /// N * x for x in R^p.
  std::vector<double> apply(std::span<const double> x) const { return basis_ * x; }

 private:
  friend NullSpaceBasis null_space_basis(const Matrix& a, double tol);
  NullSpaceBasis(Matrix n_mat, double tol) : basis_(std::move(n_mat)), source_tol_(tol) {}

  Matrix basis_;
  double source_tol_ = kDefaultRankTol;
};

/// Last n-m columns of the full Q from a Householder QR of A^T.
/// Throws NotUnderdetermined if m >= n, RankDeficient if rank(A) < m.
NullSpaceBasis null_space_basis(const Matrix& a, double tol = kDefaultRankTol);

struct Norms {
  double l1 = 0.0;
  double linf = 0.0;
};

Norms vector_norms(std::span<const double> v);
/// Single-column matrix overload; throws DimensionMismatch otherwise.
Norms vector_norms(const Matrix& v);

double norm2(std::span<const double> v);

/// Least-squares solution of M x = b (rows >= cols). Empty optional when M
/// is numerically rank deficient under the rank() convention.
std::optional<std::vector<double>> least_squares(const Matrix& m, std::span<const double> b,
                                  double tol = kDefaultRankTol);

/// Dense LU with partial pivoting for the square systems the simplex needs.
class LuFactor {
 public:
  /// Returns false if a pivot falls below `pivot_tol` (singular basis).
  bool factorize(const Matrix& a, double pivot_tol = 1e-11);
  /// Solves A x = b in place.
  void solve(std::span<double> b) const;
  /// Solves A^T x = b in place.
  void solve_transpose(std::span<double> b) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace spcert
