#include "l1_ball.hpp"

#include "spcert/error.hpp"

namespace spcert::detail {

LpProblem l1_ball_program(const Matrix& n_mat, std::span<const double> cost) {
  const std::size_t n = n_mat.rows();
  const std::size_t p = n_mat.cols();
  if (cost.size() != p) throw Error(ErrorCode::DimensionMismatch, "l1 ball objective length != p");

  LpBuilder b;
  for (std::size_t c = 0; c < p; ++c) b.add_variable(cost[c], -kInf, kInf);
  const std::size_t t0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);
  const std::size_t sp0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);
  const std::size_t sm0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);
  const std::size_t budget = b.add_variable(0.0, 0.0, kInf);

  std::vector<std::pair<std::size_t, double>> terms;
  for (std::size_t j = 0; j < n; ++j) {
    for (double dir : {-1.0, 1.0}) {
      terms.clear();
      for (std::size_t c = 0; c < p; ++c)
        if (n_mat(j, c) != 0.0) terms.emplace_back(c, n_mat(j, c));
      terms.emplace_back(t0 + j, dir);
      terms.emplace_back(dir < 0.0 ? sp0 + j : sm0 + j, -dir);
      b.add_equality(terms, 0.0);
    }
  }
  terms.clear();
  for (std::size_t j = 0; j < n; ++j) terms.emplace_back(t0 + j, 1.0);
  terms.emplace_back(budget, 1.0);
  b.add_equality(std::move(terms), 1.0);
  return b.build();
}

}  // namespace spcert::detail
