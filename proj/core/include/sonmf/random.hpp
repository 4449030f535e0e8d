#pragma once

#include <cstdint>

#include "sonmf/matrix.hpp"

namespace sonmf {

enum class RandomLaw {
  uniform,      // U(a, b)
  normal,       // N(a, b^2), b is the standard deviation
  orthonormal,  // QR of a standard normal draw; requires cols <= rows
};

// Deterministic stream splitting: mix a base seed with a stream tag so that
// generators drawing F, G and noise never share a stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Seeded dense draw, filled row by row so results are layout-independent.
// For RandomLaw::orthonormal the (a, b) parameters are ignored.
Matrix random_matrix(Index rows, Index cols, RandomLaw law, double a, double b,
                     std::uint64_t seed);

inline Matrix random_uniform(Index rows, Index cols, double lo, double hi,
                             std::uint64_t seed) {
  return random_matrix(rows, cols, RandomLaw::uniform, lo, hi, seed);
}

inline Matrix random_normal(Index rows, Index cols, double mean, double sd,
                            std::uint64_t seed) {
  return random_matrix(rows, cols, RandomLaw::normal, mean, sd, seed);
}

inline Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  return random_matrix(rows, cols, RandomLaw::orthonormal, 0.0, 1.0, seed);
}

}  // namespace sonmf
