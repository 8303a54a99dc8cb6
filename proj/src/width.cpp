#include "spcert/width.hpp"

#include <cmath>
#include <string>

#include "spcert/error.hpp"
#include "spcert/parallel.hpp"
#include "l1_ball.hpp"

namespace spcert {

namespace {

bool zero_row(const Matrix& n_mat, std::size_t i) { return norm2(n_mat.row(i)) <= kZeroRowTol; }

// Appends the terms of [N x]_j for x stored at variable offset 0.
void push_row_terms(const Matrix& n_mat, std::size_t j,
                    std::vector<std::pair<std::size_t, double>>& terms) {
  for (std::size_t c = 0; c < n_mat.cols(); ++c)
    if (n_mat(j, c) != 0.0) terms.emplace_back(c, n_mat(j, c));
}

}  // namespace

LpProblem face_problem(const NullSpaceBasis& basis, std::size_t i, double sign) {
  const Matrix& nm = basis.matrix();
  const std::size_t n = basis.n();
  const std::size_t p = basis.p();
  if (i >= n) throw Error(ErrorCode::InvalidArgument, "face index " + std::to_string(i) + " out of range");
  if (sign != 1.0 && sign != -1.0) throw Error(ErrorCode::InvalidArgument, "face sign must be +1 or -1");

  LpBuilder b;
  for (std::size_t c = 0; c < p; ++c) b.add_variable(0.0, -kInf, kInf);
  const std::size_t t0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(1.0, 0.0, j == i ? kInf : 1.0);
  const std::size_t sp0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);
  const std::size_t sm0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);

  std::vector<std::pair<std::size_t, double>> terms;
  push_row_terms(nm, i, terms);
  b.add_equality(std::move(terms), sign);
  for (std::size_t j = 0; j < n; ++j) {
    terms.clear();
    push_row_terms(nm, j, terms);
    terms.emplace_back(t0 + j, -1.0);
    terms.emplace_back(sp0 + j, 1.0);
    b.add_equality(terms, 0.0);

    terms.clear();
    push_row_terms(nm, j, terms);
    terms.emplace_back(t0 + j, 1.0);
    terms.emplace_back(sm0 + j, -1.0);
    b.add_equality(terms, 0.0);
  }
  return b.build();
}

FaceResult face_min(const NullSpaceBasis& basis, std::size_t i, double sign) {
  FaceResult r;
  r.face = i;
  if (i >= basis.n()) throw Error(ErrorCode::InvalidArgument, "face index out of range");
  if (zero_row(basis.matrix(), i)) return r;

  r.problem = face_problem(basis, i, sign);
  r.solution = solve(r.problem);
  if (r.solution.status == LpStatus::Infeasible) return r;
  if (r.solution.status != LpStatus::Optimal)
    throw Error(ErrorCode::NumericalBreakdown, "face LP reported unbounded");

  r.feasible = true;
  r.value = r.solution.objective_value;
  r.x.assign(r.solution.point.begin(), r.solution.point.begin() + static_cast<std::ptrdiff_t>(basis.p()));
  r.v = basis.apply(r.x);
  return r;
}

WidthReport gamma_width(const NullSpaceBasis& basis, unsigned threads) {
  const std::size_t n = basis.n();
  std::vector<FaceResult> faces(n);
  parallel_for(n, threads, [&](std::size_t i) { faces[i] = face_min(basis, i); });

  WidthReport rep;
  rep.per_face_values.resize(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    rep.per_face_values[i] = faces[i].value;
    if (faces[i].feasible && (!any || faces[i].value < rep.gamma)) {
      any = true;
      rep.gamma = faces[i].value;
      rep.best_face = i;
    }
  }
  if (!any) throw Error(ErrorCode::AllFacesInfeasible, "no face of the width problem is feasible");
  rep.minimizer_x = std::move(faces[rep.best_face].x);
  rep.witness_v = std::move(faces[rep.best_face].v);
  rep.k1 = sparsity_bound_k1(rep.gamma);
  return rep;
}

double gamma_reciprocal(const NullSpaceBasis& basis, unsigned threads) {
  const Matrix& nm = basis.matrix();
  const std::size_t n = basis.n();

  std::vector<double> peak(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    if (zero_row(nm, i)) return;
    std::vector<double> cost(nm.row(i).begin(), nm.row(i).end());
    for (double& c : cost) c = -c;
    const LpSolution sol = solve(detail::l1_ball_program(nm, cost));
    if (sol.status != LpStatus::Optimal)
      throw Error(ErrorCode::NumericalBreakdown, std::string("reciprocal LP ") + to_string(sol.status));
    peak[i] = -sol.objective_value;
  });

  double best = 0.0;
  for (double v : peak) best = std::max(best, v);
  if (!(best > 0.0)) throw Error(ErrorCode::AllFacesInfeasible, "null space has no nonzero coordinate");
  return 1.0 / best;
}

std::size_t sparsity_bound_k1(double gamma) {
  if (!(gamma >= 1.0 - kBoundStrictness) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "width must be >= 1, got " + std::to_string(gamma));
  const double k = std::ceil(gamma / 2.0 - kBoundStrictness) - 1.0;
  return k > 0.0 ? static_cast<std::size_t>(k) : 0;
}

}  // namespace spcert
