#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace spcert {

/// Seeded generator shared by the matrix generators and recovery experiments.
///
/// Stream definition (reproducible in any language):
///   engine   64-bit Mersenne Twister MT19937-64, seeded with the user seed
///            through the reference init_genrand64 routine (std::mt19937_64::seed)
///   uniform  u = (next() >> 11) * 2^-53, in [0, 1)
///   normal   Marsaglia polar method: a = 2u1-1, b = 2u2-1, retry until
///            0 < s = a^2+b^2 < 1; emit a*f then b*f with f = sqrt(-2 ln(s)/s)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double standard_normal();
  /// Uniform integer in [0, n) as floor(u * n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace spcert
