#pragma once

#include <cstddef>
#include <cstdint>

#include "spcert/linalg.hpp"

namespace spcert {

/// m x n matrix of i.i.d. standard normals filled row-major from Rng(seed)
/// (see random.hpp for the exact stream); columns scaled to unit norm when
/// `normalize` is set. Throws BadDimensions unless 0 < m < n.
Matrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed, bool normalize);

/// Sylvester-Hadamard matrix: H_1 = [1], H_2k = [[H_k, H_k], [H_k, -H_k]].
Matrix sylvester_hadamard(std::size_t m);

/// [I_m | H_m / sqrt(m)], an m x 2m dictionary with coherence 1/sqrt(m).
/// Throws NotPowerOfTwo.
Matrix gen_id_hadamard(std::size_t m);

}  // namespace spcert
