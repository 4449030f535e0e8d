#pragma once

#include <cstdint>

#include "sonmf/result.hpp"

namespace sonmf {

enum class InitMode { svd, kmeans, random };

InitMode init_mode_from_string(const std::string& name);
std::string to_string(InitMode mode);

struct ContinuousOptions {
  Index k = 2;
  int max_iters = 500;
  double epsilon = 1e-4;    // threshold on the raw objective decrease
  double tau = 0.5;         // initial curvilinear step
  InitMode init = InitMode::svd;
  std::uint64_t seed = 0;   // used by kmeans/random inits
  int max_halvings = 40;
  double tau_cap = 1e6;     // upper bound for the doubled step carry-over
};

// --- initializers -----------------------------------------------------------

// F0 = left singular vectors of the rank-k truncated SVD.
Matrix init_f_svd(const Matrix& x, Index k);

// F0 = orthonormalized k-means centroids of the columns of X.  Retries with
// bumped seeds (up to 5) when the centroids come out rank deficient.
Matrix init_f_kmeans(const Matrix& x, Index k, std::uint64_t seed);

// F0 = QR of a seeded standard normal draw.
Matrix init_f_random(const Matrix& x, Index k, std::uint64_t seed);

Matrix init_f(const Matrix& x, Index k, InitMode mode, std::uint64_t seed);

// --- one-step operations ----------------------------------------------------

// Exact nonnegative solve for G given an orthonormal F: G = max(X^T F, 0).
// Throws DimensionError on shape mismatch and ValidationError when F is not
// orthonormal to within 1e-8.
Matrix update_g(const Matrix& x, const Matrix& f);

// Euclidean gradient of ||X - F G^T||_F^2 in F: 2 F G^T G - 2 X G.
Matrix gradient_f(const Matrix& x, const Matrix& f, const Matrix& g);

// Curvilinear step along the Cayley transform of the skew pencil
// S = grad F^T - F grad^T, computed through the 2k x 2k Woodbury system so no
// p x p inverse is formed:
//   Y(tau) = F - tau U (I + (tau/2) V^T U)^{-1} V^T F,  U = [grad, F],
//   V = [F, -grad].
// Propagates SingularMatrixError when the small system is numerically
// singular (a sign that tau is too large).
Matrix cayley_step(const Matrix& f, const Matrix& grad, double tau);

struct LineSearchResult {
  Matrix f;            // accepted iterate, or the input F when stalled
  double cost = 0.0;   // objective at the returned F
  double tau_next = 0.0;  // doubled accepted step, carried to the next call
  bool accepted = false;
  int halvings = 0;
};

// Backtracking curvilinear search: try Y(tau), halve tau while the objective
// fails to strictly decrease, up to max_halvings.  On acceptance the returned
// tau_next is 2 * tau_accepted clamped to tau_cap; tau never resets between
// outer iterations.  cost_at must evaluate the objective at a candidate F.
LineSearchResult line_search_f(const Matrix& f, const Matrix& grad,
                               double cost_current,
                               const std::function<double(const Matrix&)>& cost_at,
                               double tau, int max_halvings,
                               double tau_cap = 1e6);

// --- driver -----------------------------------------------------------------

// Alternates update_g with the curvilinear F search on the least-squares
// objective.  Stops when the decrease lands in [0, epsilon], the budget runs
// out, or no step was ever accepted (Termination::stalled).
FactorizationResult factorize_continuous(const Matrix& x,
                                         const ContinuousOptions& opts,
                                         const IterationObserver& observer = {});

}  // namespace sonmf
