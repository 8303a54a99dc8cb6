#include "spcert/cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "l1_ball.hpp"
#include "spcert/error.hpp"
#include "spcert/lp.hpp"
#include "spcert/parallel.hpp"
#include "spcert/random.hpp"

namespace spcert {

Partition::Partition(std::size_t n, std::vector<std::size_t> support) : n_(n), support_(std::move(support)) {
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k] >= n_) throw Error(ErrorCode::InvalidArgument, "support index out of range");
    if (k > 0 && support_[k] <= support_[k - 1])
      throw Error(ErrorCode::InvalidArgument, "support must be strictly increasing");
  }
}

std::vector<std::size_t> Partition::zeros() const {
  std::vector<std::size_t> z;
  z.reserve(n_ - support_.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (k < support_.size() && support_[k] == i) ++k;
    else z.push_back(i);
  }
  return z;
}

Partition partition_of(std::span<const double> x, double zero_tol) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > zero_tol) s.push_back(i);
  return Partition(x.size(), std::move(s));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t rr = r / g;
    const std::uint64_t ii = i / g;
    const std::uint64_t nn = num / ii;
    if (rr > kMax / nn) return kMax;
    r = rr * nn;
  }
  return r;
}

namespace {

// Advances `c` (strictly increasing, values < n) to the next k-subset in
// lexicographic order; false after the last one.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_supports(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), std::size_t{0});
  do {
    out.push_back(c);
  } while (k > 0 && next_combination(c, n));
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

bool recovered(std::span<const double> planted, std::span<const double> decoded) {
  if (planted.size() != decoded.size()) return false;
  double diff = 0.0;
  for (std::size_t i = 0; i < planted.size(); ++i) diff = std::max(diff, std::abs(decoded[i] - planted[i]));
  return diff <= kRecoveryTol * std::max(1.0, max_abs(planted));
}

std::vector<double> basis_pursuit(const Matrix& a, std::span<const double> y) {
  require_finite(a, "measurement matrix");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) throw Error(ErrorCode::DimensionMismatch, "y length != rows of A");

  LpBuilder b;
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, -kInf, kInf);
  const std::size_t t0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(1.0, 0.0, kInf);
  const std::size_t sp0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);
  const std::size_t sm0 = b.num_vars();
  for (std::size_t j = 0; j < n; ++j) b.add_variable(0.0, 0.0, kInf);

  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0.0) terms.emplace_back(j, a(i, j));
    b.add_equality(std::move(terms), y[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    b.add_equality({{j, 1.0}, {t0 + j, -1.0}, {sp0 + j, 1.0}}, 0.0);  // x_j <= t_j
    b.add_equality({{j, 1.0}, {t0 + j, 1.0}, {sm0 + j, -1.0}}, 0.0);  // -t_j <= x_j
  }
  const LpSolution sol = solve(b.build());
  if (sol.status == LpStatus::Infeasible) throw Error(ErrorCode::LpInfeasible, "y is not in the range of A");
  if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalBreakdown, "basis pursuit LP unbounded");
  return {sol.point.begin(), sol.point.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<SparseSolution> l0_oracle(const Matrix& a, std::span<const double> y, std::size_t k_max) {
  require_finite(a, "measurement matrix");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) throw Error(ErrorCode::DimensionMismatch, "y length != rows of A");
  if (k_max > m) throw Error(ErrorCode::InvalidArgument, "k_max must not exceed m");
  if (binomial(n, k_max) > kMaxOracleSupports)
    throw Error(ErrorCode::TooLarge, "C(" + std::to_string(n) + "," + std::to_string(k_max) + ") supports");

  const double tol = 1e-8 * std::max(1.0, norm2(y));
  std::vector<SparseSolution> found;
  for (std::size_t k = 0; k <= k_max && found.empty(); ++k) {
    for (const auto& s : all_supports(n, k)) {
      const auto xs = least_squares(a.select_columns(s), y);
      if (!xs) continue;
      SparseSolution sol{s, std::vector<double>(n, 0.0)};
      for (std::size_t t = 0; t < k; ++t) sol.x[s[t]] = (*xs)[t];
      const std::vector<double> ax = a * std::span<const double>(sol.x);
      double res = 0.0;
      for (std::size_t i = 0; i < m; ++i) res += (ax[i] - y[i]) * (ax[i] - y[i]);
      if (std::sqrt(res) <= tol) found.push_back(std::move(sol));
    }
  }
  return found;
}

BalanceWitness support_balance_witness(const NullSpaceBasis& basis, const Partition& s, bool fix_first_sign) {
  if (s.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "partition size != n");
  const std::size_t k = s.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "support must be nonempty");
  if (k > kMaxSignedSupport)
    throw Error(ErrorCode::TooLarge, "|S| = " + std::to_string(k) + " exceeds sign-pattern guard");

  const Matrix& nm = basis.matrix();
  const std::size_t patterns = std::size_t{1} << (fix_first_sign ? k - 1 : k);
  BalanceWitness best;
  best.mu = -1.0;
  std::vector<double> cost(basis.p());
  for (std::size_t pat = 0; pat < patterns; ++pat) {
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t bit = fix_first_sign ? (t == 0 ? 0 : (pat >> (t - 1)) & 1U) : (pat >> t) & 1U;
      const double sigma = bit ? -1.0 : 1.0;
      for (std::size_t c = 0; c < basis.p(); ++c) cost[c] -= sigma * nm(s.support()[t], c);
    }
    const LpSolution sol = solve(detail::l1_ball_program(nm, cost));
    if (sol.status != LpStatus::Optimal)
      throw Error(ErrorCode::NumericalBreakdown, std::string("balance LP ") + to_string(sol.status));
    const double value = -sol.objective_value;
    if (value > best.mu) {
      best.mu = value;
      best.v = basis.apply(std::span<const double>(sol.point).first(basis.p()));
    }
  }
  return best;
}

double support_balance_mu(const NullSpaceBasis& basis, const Partition& s) {
  return support_balance_witness(basis, s).mu;
}

BalanceCheck strict_k_balanced(const NullSpaceBasis& basis, std::size_t k, unsigned threads) {
  const std::size_t n = basis.n();
  if (k < 1 || k >= n) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n-1");
  if (binomial(n, k) > kMaxBalanceSupports)
    throw Error(ErrorCode::TooLarge, "C(" + std::to_string(n) + "," + std::to_string(k) + ") supports");
  if (k > kMaxSignedSupport) throw Error(ErrorCode::TooLarge, "k exceeds sign-pattern guard");

  BalanceCheck out;
  for (auto& s : all_supports(n, k)) out.supports.emplace_back(n, std::move(s));
  out.mus.assign(out.supports.size(), 0.0);
  parallel_for(out.supports.size(), threads,
               [&](std::size_t i) { out.mus[i] = support_balance_mu(basis, out.supports[i]); });

  std::size_t worst = 0;
  for (std::size_t i = 1; i < out.mus.size(); ++i)
    if (out.mus[i] > out.mus[worst]) worst = i;
  out.worst = out.supports[worst];
  out.worst_mu = out.mus[worst];
  out.holds = out.worst_mu < 0.5 - kStrictBalanceMargin;
  return out;
}

BalancednessReport max_certified_k(const NullSpaceBasis& basis, std::size_t k_cap, unsigned threads) {
  if (k_cap >= basis.n()) throw Error(ErrorCode::InvalidArgument, "k_cap must be <= n-1");
  BalancednessReport rep;
  rep.k_cap = k_cap;
  for (std::size_t k = 1; k <= k_cap; ++k) {
    BalanceCheck check = strict_k_balanced(basis, k, threads);
    for (std::size_t i = 0; i < check.supports.size(); ++i)
      rep.mu_by_support.emplace(check.supports[i].support(), check.mus[i]);
    rep.worst_partition = check.worst;
    rep.worst_mu = check.worst_mu;
    if (!check.holds) {
      rep.failure_found = true;
      break;
    }
    rep.k_star = k;
    rep.strict_margin = 0.5 - check.worst_mu;
  }
  return rep;
}

RecoveryResult counterexample_from_witness(const Matrix& a, const NullSpaceBasis& basis, const Partition& worst,
                                           double worst_mu) {
  if (worst_mu < 0.5 - kStrictBalanceMargin)
    throw Error(ErrorCode::WitnessUnavailable, "support is strictly balanced; no failing vector exists");
  const BalanceWitness w = support_balance_witness(basis, worst);
  if (w.mu < 0.5 - kStrictBalanceMargin)
    throw Error(ErrorCode::WitnessUnavailable, "recomputed mu " + std::to_string(w.mu) + " is below 1/2");

  RecoveryResult r;
  r.planted.assign(basis.n(), 0.0);
  for (std::size_t i : worst.support()) r.planted[i] = w.v[i];
  const std::vector<double> y = a * std::span<const double>(r.planted);
  r.decoded = basis_pursuit(a, y);
  r.l1_planted = vector_norms(r.planted).l1;
  r.l1_decoded = vector_norms(r.decoded).l1;
  r.success = recovered(r.planted, r.decoded);

  if (r.success) {
    // The LP landed on the planted vertex of a tie; x - v = -v_Z is an
    // equally good (or better) feasible point, so recovery is not unique.
    std::vector<double> alt(basis.n());
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = r.planted[i] - w.v[i];
    const std::vector<double> a_alt = a * std::span<const double>(alt);
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) res = std::max(res, std::abs(a_alt[i] - y[i]));
    const double l1_alt = vector_norms(alt).l1;
    if (res > 1e-8 * std::max(1.0, a.max_abs()) || l1_alt > r.l1_planted + 1e-8 || recovered(r.planted, alt))
      throw Error(ErrorCode::InternalInvariant, "competing minimizer failed verification");
    r.decoded = std::move(alt);
    r.l1_decoded = l1_alt;
    r.success = false;
    r.tie_substituted = true;
  }
  return r;
}

ExperimentResult recovery_experiment(const Matrix& a, std::size_t k, ExperimentMode mode, std::size_t trials,
                                     std::uint64_t seed, unsigned threads) {
  require_finite(a, "measurement matrix");
  const std::size_t n = a.cols();
  if (k > n) throw Error(ErrorCode::InvalidArgument, "k exceeds n");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");

  Rng rng(seed);
  std::vector<std::vector<double>> planted;
  if (mode == ExperimentMode::Exhaustive) {
    if (binomial(n, k) > kMaxExperimentSupports)
      throw Error(ErrorCode::TooLarge, "C(" + std::to_string(n) + "," + std::to_string(k) + ") supports");
    if (k > kMaxSignedSupport) throw Error(ErrorCode::TooLarge, "k exceeds sign-pattern guard");
    for (const auto& s : all_supports(n, k)) {
      for (std::size_t pat = 0; pat < (std::size_t{1} << k); ++pat) {
        for (std::size_t t = 0; t < trials; ++t) {
          std::vector<double> x(n, 0.0);
          for (std::size_t b = 0; b < k; ++b)
            x[s[b]] = ((pat >> b) & 1U ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);
          planted.push_back(std::move(x));
        }
      }
    }
  } else {
    std::vector<std::size_t> idx(n);
    for (std::size_t t = 0; t < trials; ++t) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t b = 0; b < k; ++b) std::swap(idx[b], idx[b + rng.below(n - b)]);
      std::vector<std::size_t> s(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(s.begin(), s.end());
      std::vector<double> x(n, 0.0);
      for (std::size_t i : s) {
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        x[i] = sign * rng.uniform(0.5, 1.5);
      }
      planted.push_back(std::move(x));
    }
  }

  std::vector<char> ok(planted.size(), 0);
  parallel_for(planted.size(), threads, [&](std::size_t i) {
    const std::vector<double> y = a * std::span<const double>(planted[i]);
    ok[i] = recovered(planted[i], basis_pursuit(a, y)) ? 1 : 0;
  });

  ExperimentResult res;
  res.trials = planted.size();
  res.successes = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  res.success_rate = static_cast<double>(res.successes) / static_cast<double>(res.trials);
  return res;
}

}  // namespace spcert
