#include "spcert/generators.hpp"

#include <cmath>
#include <string>

#include "spcert/coherence.hpp"
#include "spcert/error.hpp"
#include "spcert/random.hpp"

namespace spcert {

Matrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed, bool normalize) {
  if (m == 0 || m >= n)
    throw Error(ErrorCode::BadDimensions, "need 0 < m < n, got " + std::to_string(m) + "x" + std::to_string(n));
  Rng rng(seed);
  std::vector<double> data(m * n);
  for (double& x : data) x = rng.standard_normal();
  Matrix a(m, n, std::move(data));
  return normalize ? normalize_columns(a) : a;
}

Matrix sylvester_hadamard(std::size_t m) {
  if (m == 0 || (m & (m - 1)) != 0)
    throw Error(ErrorCode::NotPowerOfTwo, std::to_string(m) + " is not a power of two");
  Matrix h(1, 1, 1.0);
  while (h.rows() < m) {
    const std::size_t k = h.rows();
    Matrix next(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        next(i, j) = h(i, j);
        next(i, j + k) = h(i, j);
        next(i + k, j) = h(i, j);
        next(i + k, j + k) = -h(i, j);
      }
    h = std::move(next);
  }
  return h;
}

Matrix gen_id_hadamard(std::size_t m) {
  const Matrix h = sylvester_hadamard(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (std::size_t j = 0; j < m; ++j) a(i, m + j) = h(i, j) * scale;
  }
  return a;
}

}  // namespace spcert
