#include "spcert/random.hpp"

#include <cmath>

namespace spcert {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::standard_normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  for (;;) {
    const double a = 2.0 * uniform01() - 1.0;
    const double b = 2.0 * uniform01() - 1.0;
    const double s = a * a + b * b;
    if (s <= 0.0 || s >= 1.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = b * f;
    return a * f;
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  const auto k = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace spcert
