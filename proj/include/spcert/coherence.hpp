#pragma once

#include <cstddef>
#include <utility>

#include "spcert/linalg.hpp"

namespace spcert {

inline constexpr double kDictionaryTol = 1e-8;

struct CoherenceReport {
  double coherence = 0.0;                          // M(A)
  std::pair<std::size_t, std::size_t> argmax_pair;  // zero-based, first < second
  std::size_t k2 = 0;
  bool is_dictionary = false;
};

/// Every column has Euclidean norm within tol of 1.
bool is_dictionary(const Matrix& a, double tol = kDictionaryTol);

/// Scales every column to unit norm. Throws ZeroColumn naming the first zero column.
Matrix normalize_columns(const Matrix& a);

/// Max |<a_i, a_j>| over i != j; the first maximal pair in (i, j) order is kept.
/// Throws NotADictionary or NotUnderdetermined when the preconditions fail.
CoherenceReport coherence(const Matrix& a, double tol = kDictionaryTol);

/// Largest k with k < (1 + 1/M)/2 - 1e-9. Throws NonpositiveCoherence for M <= 0.
std::size_t sparsity_bound_k2(double m);

struct BoundComparison {
  double gamma = 0.0;
  double coherence = 0.0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  bool theorem3_holds = false;  // 1 + 1/M <= gamma + slack
};

/// End-to-end width and coherence bounds for a full-rank dictionary with m < n.
/// Throws InternalInvariant if the computed bounds come out with k1 < k2.
BoundComparison compare_bounds(const Matrix& a, unsigned threads = 1, double slack = 1e-8);

}  // namespace spcert
