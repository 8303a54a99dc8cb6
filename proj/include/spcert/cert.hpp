#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "spcert/linalg.hpp"

namespace spcert {

/// A support set S and its complement Z in {0, ..., n-1}.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidArgument unless `support` is strictly increasing and < n.
  Partition(std::size_t n, std::vector<std::size_t> support);

  std::size_t n() const noexcept { return n_; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }
  std::vector<std::size_t> zeros() const;
  std::size_t size() const noexcept { return support_.size(); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> support_;
};

/// Support and zero set of x; entries with |x_i| <= zero_tol count as zero.
Partition partition_of(std::span<const double> x, double zero_tol = 0.0);

/// Saturating binomial coefficient (caps at UINT64_MAX).
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

inline constexpr double kRecoveryTol = 1e-6;
inline constexpr double kStrictBalanceMargin = 1e-9;
inline constexpr std::uint64_t kMaxOracleSupports = 1'000'000;
inline constexpr std::uint64_t kMaxBalanceSupports = 100'000;
inline constexpr std::uint64_t kMaxExperimentSupports = 10'000;
inline constexpr std::size_t kMaxSignedSupport = 20;

struct RecoveryResult {
  std::vector<double> planted;
  std::vector<double> decoded;
  bool success = false;
  double l1_planted = 0.0;
  double l1_decoded = 0.0;
  /// Set by counterexample_from_witness when the LP happened to return the
  /// planted vector and `decoded` holds the competing minimizer instead.
  bool tie_substituted = false;
};

/// max|decoded - planted| <= 1e-6 * max(1, max|planted|).
bool recovered(std::span<const double> planted, std::span<const double> decoded);

/// min ||x||_1 s.t. A x = y. Throws LpInfeasible when y is outside range(A).
std::vector<double> basis_pursuit(const Matrix& a, std::span<const double> y);

struct SparseSolution {
  std::vector<std::size_t> support;
  std::vector<double> x;  // length n
};

/// All sparsest solutions of A x = y with at most k_max nonzeros, found by
/// enumerating supports in increasing size and solving the restricted
/// least-squares problems. Empty result: no solution up to k_max.
std::vector<SparseSolution> l0_oracle(const Matrix& a, std::span<const double> y, std::size_t k_max);

struct BalanceWitness {
  double mu = 0.0;
  std::vector<double> v;  // maximizer in range(N) with ||v||_1 <= 1
};

/// mu(S) = max ||v_S||_1 over v in range(N), ||v||_1 <= 1, via one LP per
/// sign pattern on S. With fix_first_sign the first sign is pinned to +1
/// (v -> -v symmetry), halving the 2^|S| patterns.
BalanceWitness support_balance_witness(const NullSpaceBasis& basis, const Partition& s,
                                       bool fix_first_sign = true);
double support_balance_mu(const NullSpaceBasis& basis, const Partition& s);

struct BalanceCheck {
  bool holds = false;
  Partition worst;
  double worst_mu = 0.0;
  std::vector<Partition> supports;  // enumeration order (lexicographic)
  std::vector<double> mus;          // aligned with supports
};

/// Strict k-balancedness of range(N): max over |S| = k of mu(S) < 1/2 - 1e-9.
BalanceCheck strict_k_balanced(const NullSpaceBasis& basis, std::size_t k, unsigned threads = 1);

struct BalancednessReport {
  std::size_t k_star = 0;
  std::size_t k_cap = 0;
  /// True when some level <= k_cap failed; the worst_* fields then describe
  /// the failing level k_star + 1. Otherwise they describe level k_cap.
  bool failure_found = false;
  Partition worst_partition;
  double worst_mu = 0.0;
  /// 1/2 - (max mu at level k_star); 1/2 when k_star = 0.
  double strict_margin = 0.5;
  std::map<std::vector<std::size_t>, double> mu_by_support;
};

/// Largest k <= k_cap with strict k-balancedness, scanning k = 1, 2, ... and
/// stopping at the first failure.
BalancednessReport max_certified_k(const NullSpaceBasis& basis, std::size_t k_cap, unsigned threads = 1);

/// Plants x = v_S for the maximizing null-space vector v of mu(S), decodes
/// y = A x with basis pursuit and reports the (necessarily failed) recovery.
/// Throws WitnessUnavailable when worst_mu < 1/2 - 1e-9.
RecoveryResult counterexample_from_witness(const Matrix& a, const NullSpaceBasis& basis,
                                           const Partition& worst, double worst_mu);

enum class ExperimentMode { Exhaustive, Random };

struct ExperimentResult {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
};

/// Plants k-sparse vectors with magnitudes uniform in [0.5, 1.5] and decodes
/// them with basis pursuit.
///   Exhaustive: every support in lexicographic order, every sign pattern
///     (bit b of the pattern index negates the b-th support entry), then
///     `trials` magnitude draws each.
///   Random: `trials` draws of (support by partial Fisher-Yates, then per
///     sorted support entry a sign u < 1/2 -> -1 and a magnitude).
ExperimentResult recovery_experiment(const Matrix& a, std::size_t k, ExperimentMode mode,
                                     std::size_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace spcert
