#include "sonmf/random.hpp"

#include <random>

#include "sonmf/decompose.hpp"

namespace sonmf {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed ^ rotated stream tag.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Matrix random_matrix(Index rows, Index cols, RandomLaw law, double a, double b,
                     std::uint64_t seed) {
  require(rows > 0 && cols > 0, "random_matrix: dimensions must be positive");
  if (law == RandomLaw::orthonormal)
    require(cols <= rows, "random_matrix: orthonormal draw needs cols <= rows");

  std::mt19937_64 rng(seed);
  Matrix m(rows, cols);
  switch (law) {
    case RandomLaw::uniform: {
      require(a <= b, "random_matrix: uniform bounds out of order");
      std::uniform_real_distribution<double> dist(a, b);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
      break;
    }
    case RandomLaw::normal: {
      require(b >= 0, "random_matrix: negative standard deviation");
      std::normal_distribution<double> dist(a, b);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
      break;
    }
    case RandomLaw::orthonormal: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
      m = qr_orthonormalize(m);
      break;
    }
  }
  return m;
}

}  // namespace sonmf
