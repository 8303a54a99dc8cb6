#include "spcert/coherence.hpp"

#include <cmath>
#include <string>

#include "spcert/error.hpp"
#include "spcert/width.hpp"

namespace spcert {

namespace {

double column_norm(const Matrix& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

bool is_dictionary(const Matrix& a, double tol) {
  require_finite(a, "matrix");
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (std::abs(column_norm(a, j) - 1.0) > tol) return false;
  return true;
}

Matrix normalize_columns(const Matrix& a) {
  require_finite(a, "matrix");
  Matrix out = a;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double norm = column_norm(a, j);
    if (norm == 0.0) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) /= norm;
  }
  return out;
}

CoherenceReport coherence(const Matrix& a, double tol) {
  if (a.rows() >= a.cols()) throw Error(ErrorCode::NotUnderdetermined, "coherence needs m < n");
  if (!is_dictionary(a, tol)) throw Error(ErrorCode::NotADictionary, "columns are not unit vectors");

  CoherenceReport rep;
  rep.is_dictionary = true;
  rep.coherence = -1.0;
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) dot += a(r, i) * a(r, j);
      if (std::abs(dot) > rep.coherence) {
        rep.coherence = std::abs(dot);
        rep.argmax_pair = {i, j};
      }
    }
  rep.k2 = sparsity_bound_k2(rep.coherence);
  return rep;
}

std::size_t sparsity_bound_k2(double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::NonpositiveCoherence, "coherence must be positive");
  const double k = std::ceil(0.5 * (1.0 + 1.0 / m) - kBoundStrictness) - 1.0;
  return k > 0.0 ? static_cast<std::size_t>(k) : 0;
}

BoundComparison compare_bounds(const Matrix& a, unsigned threads, double slack) {
  const CoherenceReport coh = coherence(a);
  const WidthReport width = gamma_width(null_space_basis(a), threads);

  BoundComparison out;
  out.gamma = width.gamma;
  out.coherence = coh.coherence;
  out.k1 = width.k1;
  out.k2 = coh.k2;
  out.theorem3_holds = 1.0 + 1.0 / coh.coherence <= width.gamma + slack;
  if (out.k1 < out.k2) {
    throw Error(ErrorCode::InternalInvariant,
                "width bound k1=" + std::to_string(out.k1) + " below coherence bound k2=" +
                    std::to_string(out.k2));
  }
  return out;
}

}  // namespace spcert
