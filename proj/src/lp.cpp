#include "spcert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spcert/error.hpp"

namespace spcert {

void LpProblem::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, "LpProblem: " + msg); };
  if (objective.size() != num_vars) fail("objective length != num_vars");
  if (lower.size() != num_vars || upper.size() != num_vars) fail("bound length != num_vars");
  if (eq_matrix.cols() != num_vars) fail("eq_matrix column count != num_vars");
  if (eq_rhs.size() != eq_matrix.rows()) fail("eq_rhs length != eq_matrix rows");
  for (std::size_t j = 0; j < num_vars; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) fail("NaN bound");
    if (lower[j] > upper[j]) fail("lower > upper at variable " + std::to_string(j));
    if (lower[j] == kInf || upper[j] == -kInf) fail("empty bound interval");
    if (!std::isfinite(objective[j])) fail("non-finite objective");
  }
  for (double b : eq_rhs)
    if (!std::isfinite(b)) fail("non-finite rhs");
  require_finite(eq_matrix, "eq_matrix");
}

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace {

constexpr double kOptTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

// Working state of one solve. Columns [0, nv) are structural; column nv+i is
// the phase-one artificial for row i, equal to sign_i * e_i.
class Simplex {
 public:
  explicit Simplex(const LpProblem& p)
      : prob_(p), nv_(p.num_vars), rows_(p.eq_matrix.rows()), total_(nv_ + rows_) {
    lo_ = p.lower;
    up_ = p.upper;
    lo_.resize(total_, 0.0);
    up_.resize(total_, kInf);
    x_.assign(total_, 0.0);
    state_.assign(total_, VarState::AtLower);
    art_sign_.assign(rows_, 1.0);
    head_.resize(rows_);
    cap_ = 50 * (nv_ + rows_);

    for (std::size_t j = 0; j < nv_; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = VarState::AtLower;
      } else if (std::isfinite(up_[j])) {
        x_[j] = up_[j];
        state_[j] = VarState::AtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = VarState::FreeZero;
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      double res = p.eq_rhs[i];
      for (std::size_t j = 0; j < nv_; ++j) res -= p.eq_matrix(i, j) * x_[j];
      art_sign_[i] = res >= 0.0 ? 1.0 : -1.0;
      const std::size_t a = nv_ + i;
      x_[a] = std::abs(res);
      state_[a] = VarState::Basic;
      head_[i] = a;
    }
  }

  LpSolution run() {
    LpSolution sol;
    if (rows_ > 0) {
      std::vector<double> phase1(total_, 0.0);
      for (std::size_t i = 0; i < rows_; ++i) phase1[nv_ + i] = 1.0;
      if (iterate(phase1) != Outcome::Optimal)
        throw Error(ErrorCode::NumericalBreakdown, "phase one reported unbounded");

      double infeasibility = 0.0;
      double bscale = 1.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        infeasibility += x_[nv_ + i];
        bscale = std::max(bscale, std::abs(prob_.eq_rhs[i]));
      }
      if (infeasibility > kFeasTol * bscale) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      // Artificials are pinned to zero; any still basic (redundant rows)
      // leave through degenerate pivots or stay at zero.
      for (std::size_t i = 0; i < rows_; ++i) up_[nv_ + i] = 0.0;
    }

    std::vector<double> phase2(total_, 0.0);
    std::copy(prob_.objective.begin(), prob_.objective.end(), phase2.begin());
    const Outcome out = iterate(phase2);
    sol.iterations = iterations_;
    if (out == Outcome::Unbounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.point.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(nv_));
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < nv_; ++j) sol.objective_value += prob_.objective[j] * sol.point[j];
    sol.duals = y_;
    return sol;
  }

 private:
  enum class Outcome { Optimal, Unbounded };

  double entry(std::size_t i, std::size_t j) const {
    if (j < nv_) return prob_.eq_matrix(i, j);
    return (j - nv_ == i) ? art_sign_[i] : 0.0;
  }

  double column_dot(std::size_t j, const std::vector<double>& v) const {
    if (j >= nv_) return art_sign_[j - nv_] * v[j - nv_];
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += prob_.eq_matrix(i, j) * v[i];
    return s;
  }

  void refactor() {
    Matrix basis(rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < rows_; ++k) basis(i, k) = entry(i, head_[k]);
    if (!lu_.factorize(basis))
      throw Error(ErrorCode::NumericalBreakdown, "singular basis after " + std::to_string(iterations_) +
                                                     " iterations");

    // x_B = B^{-1} (b - N x_N)
    std::vector<double> rhs(prob_.eq_rhs.begin(), prob_.eq_rhs.end());
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      for (std::size_t i = 0; i < rows_; ++i) rhs[i] -= entry(i, j) * x_[j];
    }
    lu_.solve(rhs);
    for (std::size_t k = 0; k < rows_; ++k) x_[head_[k]] = rhs[k];
  }

  Outcome iterate(const std::vector<double>& cost) {
    std::size_t degenerate_run = 0;
    for (;;) {
      if (iterations_ >= cap_)
        throw Error(ErrorCode::NumericalBreakdown,
                    "iteration cap " + std::to_string(cap_) + " exceeded");
      refactor();

      y_.assign(rows_, 0.0);
      for (std::size_t k = 0; k < rows_; ++k) y_[k] = cost[head_[k]];
      lu_.solve_transpose(y_);

      const bool bland = degenerate_run >= 2 * nv_;
      std::size_t enter = total_;
      double enter_dir = 0.0;
      double best = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || lo_[j] == up_[j]) continue;
        const double d = cost[j] - column_dot(j, y_);
        double dir = 0.0;
        if (s == VarState::AtLower && d < -kOptTol) dir = 1.0;
        else if (s == VarState::AtUpper && d > kOptTol) dir = -1.0;
        else if (s == VarState::FreeZero && std::abs(d) > kOptTol) dir = d < 0.0 ? 1.0 : -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter == total_) return Outcome::Optimal;

      std::vector<double> alpha(rows_);
      for (std::size_t i = 0; i < rows_; ++i) alpha[i] = entry(i, enter);
      lu_.solve(alpha);

      // x_B moves at rate delta_i = -dir * alpha_i per unit step.
      auto limit = [&](std::size_t k, double slack) -> double {
        const std::size_t b = head_[k];
        const double delta = -enter_dir * alpha[k];
        if (delta < 0.0 && std::isfinite(lo_[b])) return (x_[b] - lo_[b] + slack) / -delta;
        if (delta > 0.0 && std::isfinite(up_[b])) return (up_[b] - x_[b] + slack) / delta;
        return kInf;
      };

      std::size_t leave = rows_;
      double theta = kInf;
      if (bland) {
        for (std::size_t k = 0; k < rows_; ++k)
          if (std::abs(alpha[k]) > kPivotTol) theta = std::min(theta, limit(k, 0.0));
        if (std::isfinite(theta)) {
          const double tie = theta + 1e-12 * std::max(1.0, theta);
          for (std::size_t k = 0; k < rows_; ++k) {
            if (std::abs(alpha[k]) <= kPivotTol || limit(k, 0.0) > tie) continue;
            if (leave == rows_ || head_[k] < head_[leave]) leave = k;
          }
        }
      } else {
        double relaxed = kInf;
        for (std::size_t k = 0; k < rows_; ++k)
          if (std::abs(alpha[k]) > kPivotTol) relaxed = std::min(relaxed, limit(k, kFeasTol));
        if (std::isfinite(relaxed)) {
          double biggest = 0.0;
          for (std::size_t k = 0; k < rows_; ++k) {
            if (std::abs(alpha[k]) <= kPivotTol || limit(k, 0.0) > relaxed) continue;
            if (std::abs(alpha[k]) > biggest) {
              biggest = std::abs(alpha[k]);
              leave = k;
            }
          }
          theta = limit(leave, 0.0);
        }
      }
      theta = std::max(theta, 0.0);

      const double span = up_[enter] - lo_[enter];
      ++iterations_;
      if (std::isfinite(span) && span <= theta) {
        // Bound flip: the entering variable reaches its opposite bound first.
        x_[enter] = enter_dir > 0.0 ? up_[enter] : lo_[enter];
        state_[enter] = enter_dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
        degenerate_run = span <= kDegenerateStep ? degenerate_run + 1 : 0;
        continue;
      }
      if (leave == rows_) return Outcome::Unbounded;

      const std::size_t out = head_[leave];
      const double delta = -enter_dir * alpha[leave];
      if (delta < 0.0) {
        x_[out] = lo_[out];
        state_[out] = VarState::AtLower;
      } else {
        x_[out] = up_[out];
        state_[out] = VarState::AtUpper;
      }
      x_[enter] += enter_dir * theta;
      state_[enter] = VarState::Basic;
      head_[leave] = enter;
      degenerate_run = theta <= kDegenerateStep ? degenerate_run + 1 : 0;
    }
  }

  const LpProblem& prob_;
  std::size_t nv_, rows_, total_;
  std::size_t cap_ = 0;
  std::size_t iterations_ = 0;
  std::vector<double> lo_, up_, x_, art_sign_, y_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  LuFactor lu_;
};

}  // namespace

LpSolution solve(const LpProblem& prob) {
  prob.validate();
  Simplex simplex(prob);
  return simplex.run();
}

bool check_solution(const LpProblem& prob, const LpSolution& sol, double tol) {
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorCode::InvalidArgument, std::string("check_solution on ") + to_string(sol.status) +
                                                " solution");
  prob.validate();
  if (sol.point.size() != prob.num_vars) return false;

  for (std::size_t j = 0; j < prob.num_vars; ++j) {
    const double z = sol.point[j];
    if (!std::isfinite(z)) return false;
    if (z < prob.lower[j] - tol || z > prob.upper[j] + tol) return false;
  }
  const std::vector<double> lhs = prob.eq_matrix * std::span<const double>(sol.point);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (std::abs(lhs[i] - prob.eq_rhs[i]) > tol * std::max(1.0, std::abs(prob.eq_rhs[i]))) return false;

  double obj = 0.0;
  for (std::size_t j = 0; j < prob.num_vars; ++j) obj += prob.objective[j] * sol.point[j];
  return std::abs(obj - sol.objective_value) <= tol * std::max(1.0, std::abs(sol.objective_value));
}

DualCertificate dual_certificate(const LpProblem& prob, std::span<const double> y, double tol) {
  prob.validate();
  if (y.size() != prob.eq_rhs.size())
    throw Error(ErrorCode::DimensionMismatch, "dual vector length != number of equalities");
  DualCertificate cert;
  cert.feasible = true;
  for (std::size_t i = 0; i < y.size(); ++i) cert.objective += prob.eq_rhs[i] * y[i];
  for (std::size_t j = 0; j < prob.num_vars; ++j) {
    double d = prob.objective[j];
    for (std::size_t i = 0; i < y.size(); ++i) d -= prob.eq_matrix(i, j) * y[i];
    if (d > 0.0) {
      if (std::isfinite(prob.lower[j])) cert.objective += d * prob.lower[j];
      else cert.max_violation = std::max(cert.max_violation, d);
    } else if (d < 0.0) {
      if (std::isfinite(prob.upper[j])) cert.objective += d * prob.upper[j];
      else cert.max_violation = std::max(cert.max_violation, -d);
    }
  }
  cert.feasible = cert.max_violation <= tol;
  return cert;
}

std::size_t LpBuilder::add_variable(double cost, double lower, double upper) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return cost_.size() - 1;
}

void LpBuilder::add_equality(std::vector<std::pair<std::size_t, double>> terms, double rhs) {
  rows_.push_back(std::move(terms));
  rhs_.push_back(rhs);
}

LpProblem LpBuilder::build() const {
  LpProblem p;
  p.num_vars = cost_.size();
  p.objective = cost_;
  p.lower = lower_;
  p.upper = upper_;
  p.eq_rhs = rhs_;
  p.eq_matrix = Matrix(rows_.size(), p.num_vars);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : rows_[i]) {
      if (j >= p.num_vars) throw Error(ErrorCode::InvalidArgument, "LpBuilder: variable index out of range");
      p.eq_matrix(i, j) += v;
    }
  return p;
}

}  // namespace spcert
