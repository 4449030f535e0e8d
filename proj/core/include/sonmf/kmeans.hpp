#pragma once

#include <cstdint>
#include <vector>

#include "sonmf/matrix.hpp"

namespace sonmf {

struct KMeansResult {
  Matrix centroids;             // p x k, one centroid per column
  std::vector<int> assignment;  // cluster index per column of X
  int iterations = 0;
};

// Lloyd's algorithm on the columns of X with a seeded k-distinct-columns
// start.  Runs at most max_iters sweeps, stopping early when assignments
// settle.  Empty clusters keep their previous centroid.
KMeansResult kmeans_columns(const Matrix& x, Index k, std::uint64_t seed,
                            int max_iters = 50);

}  // namespace sonmf
