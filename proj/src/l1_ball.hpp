#pragma once

#include <span>

#include "spcert/linalg.hpp"
#include "spcert/lp.hpp"

namespace spcert::detail {

/// minimize cost^T x over {x in R^p : ||N x||_1 <= 1}, epigraph form:
/// variables (x free, t >= 0, s+ >= 0, s- >= 0, budget >= 0) with rows
/// [Nx]_j - t_j + s+_j = 0, [Nx]_j + t_j - s-_j = 0, sum t + budget = 1.
/// x occupies variables [0, p).
LpProblem l1_ball_program(const Matrix& n_mat, std::span<const double> cost);

}  // namespace spcert::detail
