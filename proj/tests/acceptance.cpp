// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "spcert/cert.hpp"
#include "spcert/coherence.hpp"
#include "spcert/error.hpp"
#include "spcert/generators.hpp"
#include "spcert/lp.hpp"
#include "spcert/random.hpp"
#include "spcert/width.hpp"
#include "test_support.hpp"

using namespace spcert;

namespace {

const unsigned kThreads = std::max(1U, std::thread::hardware_concurrency());

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;  // keep the first failure
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::vector<std::size_t>> supports_of(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), std::size_t{0});
  for (;;) {
    out.push_back(s);
    std::size_t i = k;
    while (i-- > 0 && s[i] == n - k + i) {
    }
    if (i == static_cast<std::size_t>(-1)) return out;
    ++s[i];
    for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

Matrix random_rotation(std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> d(p * p);
  for (double& x : d) x = rng.standard_normal();
  return qr_decompose(Matrix(p, p, std::move(d))).q;
}

Outcome analytic_gamma() {
  Outcome o;
  const std::pair<Matrix, double> cases[] = {
      {Matrix{{1, 1}}, 2.0}, {Matrix{{1, 1, 1}}, 2.0}, {Matrix{{1, 0, 0}, {0, 1, 0}}, 1.0}};
  for (const auto& [a, want] : cases) {
    const WidthReport w = gamma_width(null_space_basis(a));
    o.expect(std::abs(w.gamma - want) <= 1e-8, fmt("gamma %.12g, wanted %.12g", w.gamma, want));
    o.expect(w.k1 == 0, fmt("k1 = %zu", w.k1));
  }
  return o;
}

Outcome formulation_cross_check() {
  Outcome o;
  double worst_recip = 0.0, worst_basis = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t m = seed <= 10 ? 4 : 6;
    const Matrix a = gen_gaussian(m, 2 * m, seed, false);
    const NullSpaceBasis b = null_space_basis(a);
    const WidthReport w = gamma_width(b, kThreads);
    worst_recip = std::max(worst_recip, std::abs(w.gamma - gamma_reciprocal(b, kThreads)));

    const NullSpaceBasis rotated = NullSpaceBasis::from_columns(a, b.matrix() * random_rotation(b.p(), 1000 + seed));
    worst_basis = std::max(worst_basis, std::abs(gamma_width(rotated, kThreads).gamma - w.gamma));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::reverse(perm.begin(), perm.end());
    worst_basis = std::max(worst_basis, std::abs(gamma_width(null_space_basis(a.select_rows(perm)), kThreads).gamma - w.gamma));

    // Spot-check the optimal face LP against its dual.
    const FaceResult f = face_min(b, w.best_face);
    o.expect(check_solution(f.problem, f.solution, 1e-8), fmt("seed %llu: face LP fails check_solution", (unsigned long long)seed));
    const DualCertificate d = dual_certificate(f.problem, f.solution.duals, 1e-9);
    o.expect(d.feasible && std::abs(d.objective - f.value) <= 1e-7,
             fmt("seed %llu: dual objective %.12g vs %.12g", (unsigned long long)seed, d.objective, f.value));
  }
  o.expect(worst_recip <= 1e-6, fmt("reciprocal gap %.3g", worst_recip));
  o.expect(worst_basis <= 1e-7, fmt("basis gap %.3g", worst_basis));
  if (o.ok) o.detail = fmt("max reciprocal gap %.2e, max basis gap %.2e", worst_recip, worst_basis);
  return o;
}

Outcome coherence_bound_at_scale() {
  Outcome o;
  int holds = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t m = std::vector<std::size_t>{6, 8, 10}[(seed - 1) % 3];
    const BoundComparison c = compare_bounds(gen_gaussian(m, 2 * m, seed, true), kThreads);
    if (c.theorem3_holds && c.k1 >= c.k2) ++holds;
    else o.fail(fmt("seed %llu: 1+1/M = %.12g, gamma = %.12g", (unsigned long long)seed, 1 + 1 / c.coherence, c.gamma));
  }
  if (o.ok) o.detail = fmt("%d/50", holds);
  return o;
}

Outcome identity_hadamard() {
  Outcome o;
  const Matrix a = gen_id_hadamard(4);
  const NullSpaceBasis b = null_space_basis(a);
  const CoherenceReport c = coherence(a);
  const WidthReport w = gamma_width(b, kThreads);
  const BalancednessReport bal = max_certified_k(b, 3, kThreads);
  const ExperimentResult r = recovery_experiment(a, 1, ExperimentMode::Exhaustive, 3, 1, kThreads);
  o.expect(std::abs(c.coherence - 0.5) <= 1e-12, fmt("M = %.17g", c.coherence));
  o.expect(c.k2 == 1, fmt("k2 = %zu", c.k2));
  o.expect(w.gamma >= 3.0 - 1e-8, fmt("gamma = %.12g", w.gamma));
  o.expect(w.k1 >= 1, fmt("k1 = %zu", w.k1));
  o.expect(bal.k_star >= 1, fmt("k* = %zu", bal.k_star));
  o.expect(r.trials == 48 && r.successes == 48, fmt("recovered %zu/%zu", r.successes, r.trials));
  if (o.ok) o.detail = fmt("gamma %.10g, k*=%zu, %zu/%zu recovered", w.gamma, bal.k_star, r.successes, r.trials);
  return o;
}

Outcome certificate_ordering() {
  Outcome o;
  std::string ks;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t m = 3 + seed % 3;
    const std::size_t n = 2 * m;
    const bool dict = seed % 2 == 1;
    const Matrix a = gen_gaussian(m, n, seed, dict);
    const NullSpaceBasis b = null_space_basis(a);
    const WidthReport w = gamma_width(b, kThreads);
    // k* <= m/2 always, so level m/2 + 1 is guaranteed to fail.
    const BalancednessReport bal = max_certified_k(b, std::min(n - 1, m / 2 + 1), kThreads);
    const std::string tag = fmt("seed %llu: ", (unsigned long long)seed);
    if (dict) {
      const std::size_t k2 = coherence(a).k2;
      o.expect(k2 <= w.k1, tag + fmt("k2 = %zu > k1 = %zu", k2, w.k1));
    }
    o.expect(w.k1 <= bal.k_star, tag + fmt("k1 = %zu > k* = %zu", w.k1, bal.k_star));

    const ExperimentResult r = recovery_experiment(a, bal.k_star, ExperimentMode::Exhaustive, 2, seed, kThreads);
    o.expect(r.success_rate == 1.0, tag + fmt("rate %.6f at k* = %zu", r.success_rate, bal.k_star));

    if (!bal.failure_found) {
      o.fail(tag + "no failing level found");
      continue;
    }
    const RecoveryResult cx = counterexample_from_witness(a, b, bal.worst_partition, bal.worst_mu);
    o.expect(!cx.success, tag + "counterexample recovered");
    ks += std::to_string(bal.k_star);
  }
  if (o.ok) o.detail = "k* per seed: " + ks;
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix a = gen_gaussian(4, 8, seed, false);
    const std::size_t k_star = max_certified_k(null_space_basis(a), 3, kThreads).k_star;
    Rng rng(500 + seed);
    for (std::size_t k = 0; k <= k_star; ++k)
      for (const auto& s : supports_of(8, k)) {
        std::vector<double> x(8, 0.0);
        for (std::size_t j : s) x[j] = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);
        const std::vector<double> y = a * std::span<const double>(x);
        const auto sols = l0_oracle(a, y, k);
        if (sols.size() != 1) {
          o.fail(fmt("seed %llu: %zu sparsest solutions", (unsigned long long)seed, sols.size()));
          continue;
        }
        const double gap = test::max_abs_diff(sols[0].x, basis_pursuit(a, y));
        o.expect(gap <= 1e-6, fmt("seed %llu: oracle vs BP gap %.3g", (unsigned long long)seed, gap));
        ++checked;
      }
  }
  if (o.ok) o.detail = fmt("%zu supports", checked);
  return o;
}

Outcome lp_kernel() {
  Outcome o;
  {
    LpBuilder b;
    b.add_variable(-1.0, 0.0, kInf);
    b.add_variable(-1.0, 0.0, kInf);
    b.add_equality({{0, 1.0}, {1, 1.0}}, 1.0);
    const LpSolution s = solve(b.build());
    o.expect(s.status == LpStatus::Optimal && std::abs(s.objective_value + 1.0) <= 1e-12, "trivial optimal LP");
  }
  {
    LpBuilder b;
    b.add_variable(-1.0, 0.0, kInf);
    o.expect(solve(b.build()).status == LpStatus::Unbounded, "trivial unbounded LP");
  }
  {
    LpBuilder b;
    b.add_variable(1.0, 0.0, kInf);
    b.add_equality({{0, 1.0}}, -1.0);
    o.expect(solve(b.build()).status == LpStatus::Infeasible, "trivial infeasible LP");
  }
  double worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const LpProblem p = test::random_feasible_lp(seed);
    const LpSolution s = solve(p);
    if (s.status != LpStatus::Optimal) {
      o.fail(fmt("random LP %llu: %s", (unsigned long long)seed, to_string(s.status)));
      continue;
    }
    o.expect(check_solution(p, s, 1e-8), fmt("random LP %llu fails check_solution", (unsigned long long)seed));
    const DualCertificate d = dual_certificate(p, s.duals, 1e-9);
    const double gap = std::abs(d.objective - s.objective_value);
    worst_gap = std::max(worst_gap, gap);
    o.expect(d.feasible && gap <= 1e-7, fmt("random LP %llu: dual gap %.3g", (unsigned long long)seed, gap));
  }
  if (o.ok) o.detail = fmt("max dual gap %.2e", worst_gap);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 analytic gamma cases", 1.0, analytic_gamma},
      {"2 formulation cross-check", 60.0, formulation_cross_check},
      {"3 coherence vs width bound on 50 dictionaries", 180.0, coherence_bound_at_scale},
      {"4 identity + Hadamard m=4", 30.0, identity_hadamard},
      {"5 certificate ordering", 180.0, certificate_ordering},
      {"6 l0 oracle agreement", 120.0, oracle_agreement},
      {"7 LP kernel suite", 30.0, lp_kernel},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) o.fail(fmt("took %.2f s, limit %.0f s", secs, c.limit_s));
    std::printf("%s  [%s] %.3f s  %s\n", o.ok ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
