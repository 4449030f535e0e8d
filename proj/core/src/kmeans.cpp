#include "sonmf/kmeans.hpp"

#include <limits>
#include <numeric>
#include <random>

namespace sonmf {

KMeansResult kmeans_columns(const Matrix& x, Index k, std::uint64_t seed,
                            int max_iters) {
  const Index n = x.cols();
  require(k >= 1 && k <= n, "kmeans_columns: need 1 <= k <= #columns");

  // Seeded start from k distinct columns.
  std::mt19937_64 rng(seed);
  std::vector<Index> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(pick(rng))]);
  }

  KMeansResult res;
  res.centroids.resize(x.rows(), k);
  for (Index c = 0; c < k; ++c)
    res.centroids.col(c) = x.col(pool[static_cast<size_t>(c)]);
  res.assignment.assign(static_cast<size_t>(n), 0);

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Index j = 0; j < n; ++j) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < k; ++c) {
        const double d = (x.col(j) - res.centroids.col(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (res.assignment[static_cast<size_t>(j)] != best) {
        res.assignment[static_cast<size_t>(j)] = best;
        changed = true;
      }
    }
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(x.rows(), k);
    std::vector<long> counts(static_cast<size_t>(k), 0);
    for (Index j = 0; j < n; ++j) {
      const int c = res.assignment[static_cast<size_t>(j)];
      sums.col(c) += x.col(j);
      ++counts[static_cast<size_t>(c)];
    }
    for (Index c = 0; c < k; ++c)
      if (counts[static_cast<size_t>(c)] > 0)
        res.centroids.col(c) =
            sums.col(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
  }
  return res;
}

}  // namespace sonmf
