#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "spcert/linalg.hpp"

namespace spcert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c^T z  subject to  E z = b,  lower <= z <= upper.
/// Bounds may be -inf / +inf. Inequalities are expressed through slack columns.
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  Matrix eq_matrix;
  std::vector<double> eq_rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  /// Throws InvalidArgument when shapes or bounds are inconsistent.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s) noexcept;

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> point;    // empty unless Optimal
  double objective_value = 0.0;  // meaningful only when Optimal
  std::size_t iterations = 0;
  /// Equality multipliers y = B^{-T} c_B from the final basis (Optimal only).
  std::vector<double> duals;
};

/// Two-phase bounded-variable primal simplex on a dense LU-factorized basis.
/// Dantzig pricing with a Harris ratio test; switches to Bland's rule after
/// 2*num_vars consecutive degenerate pivots. Throws NumericalBreakdown if the
/// basis turns singular or 50*(num_vars + rows) iterations are exceeded.
LpSolution solve(const LpProblem& prob);

/// Independent verifier: equalities within tol*max(1,|b_i|), bounds within
/// tol, objective within tol*max(1,|objective|). Throws InvalidArgument if
/// sol is not Optimal.
bool check_solution(const LpProblem& prob, const LpSolution& sol, double tol);

struct DualCertificate {
  bool feasible = false;
  double objective = 0.0;
  double max_violation = 0.0;
};

/// Lower bound on the LP optimum implied by equality multipliers y:
///   b^T y + sum_j min over z_j in [l_j,u_j] of (c - E^T y)_j z_j.
/// Reduced costs of magnitude <= tol pointing toward an infinite bound are
/// treated as zero; larger ones make the certificate infeasible.
DualCertificate dual_certificate(const LpProblem& prob, std::span<const double> y, double tol);

/// Incremental assembly of an LpProblem from sparse rows.
class LpBuilder {
 public:
  std::size_t add_variable(double cost, double lower, double upper);
  void add_equality(std::vector<std::pair<std::size_t, double>> terms, double rhs);
  std::size_t num_vars() const noexcept { return cost_.size(); }
  LpProblem build() const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  std::vector<double> rhs_;
};

}  // namespace spcert
