#pragma once

#include <cstddef>
#include <vector>

#include "spcert/linalg.hpp"
#include "spcert/lp.hpp"

namespace spcert {

/// Rows of N with Euclidean norm at or below this are treated as identically
/// zero: coordinate i vanishes on the whole null space and face i is empty.
inline constexpr double kZeroRowTol = 1e-10;

/// Strictness margin used by the integer sparsity bounds k1 and k2.
inline constexpr double kBoundStrictness = 1e-9;

/// Outcome of minimizing ||N x||_1 over the face {[N x]_i = sign, |[N x]_j| <= 1}.
struct FaceResult {
  std::size_t face = 0;
  bool feasible = false;
  double value = kInf;            // +inf when the face is empty
  std::vector<double> x;          // minimizer in R^p
  std::vector<double> v;          // N x
  LpProblem problem;              // the LP actually solved (empty for zero rows)
  LpSolution solution;
};

/// LP for face i: variables (x in R^p free, t in R^n, s+ in R^n, s- in R^n),
/// minimize sum t subject to [Nx]_i = sign, [Nx]_j - t_j + s+_j = 0,
/// [Nx]_j + t_j - s-_j = 0, 0 <= t_j <= 1 for j != i, t_i >= 0, s >= 0.
LpProblem face_problem(const NullSpaceBasis& basis, std::size_t i, double sign = 1.0);

/// Faces are zero-based. Throws InvalidArgument for i >= n or sign not +-1.
FaceResult face_min(const NullSpaceBasis& basis, std::size_t i, double sign = 1.0);

struct WidthReport {
  double gamma = kInf;
  std::size_t best_face = 0;
  std::vector<double> minimizer_x;      // length p
  std::vector<double> witness_v;        // length n, = N * minimizer_x
  std::vector<double> per_face_values;  // length n, +inf for empty faces
  std::size_t k1 = 0;
};

/// gamma_{1,inf} = min over faces of face_min. Only the n positive faces are
/// solved; v -> -v maps each negative face onto its positive twin.
WidthReport gamma_width(const NullSpaceBasis& basis, unsigned threads = 1);

/// Width through the reciprocal problem: 1 / max_i max {[Nx]_i : ||Nx||_1 <= 1}.
double gamma_reciprocal(const NullSpaceBasis& basis, unsigned threads = 1);

/// Largest k with k < gamma/2 - 1e-9, never negative. Throws InvalidArgument
/// for gamma < 1.
std::size_t sparsity_bound_k1(double gamma);

}  // namespace spcert
