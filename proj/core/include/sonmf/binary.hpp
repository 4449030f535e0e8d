#pragma once

#include <cstdint>

#include "sonmf/continuous.hpp"
#include "sonmf/result.hpp"

namespace sonmf {

struct BinaryOptions {
  Index k = 2;
  int max_iters = 500;
  double epsilon = 1e-4;  // threshold on the total log-likelihood decrease
  double tau = 2.0;       // initial curvilinear step
  double eta = 0.05;      // damping of the Newton step on G
  InitMode init = InitMode::svd;
  std::uint64_t seed = 0;
  int max_halvings = 40;
  double tau_cap = 1e6;
  double hessian_floor = 1e-12;
};

// Elementwise logistic map, overflow-safe at both tails.
Matrix sigmoid_matrix(const Matrix& theta);

// Bernoulli negative log-likelihood of X under P = sigmoid(F G^T):
//   sum_ij [ log(1 + exp(theta_ij)) - x_ij theta_ij ],
// evaluated as max(theta,0) + log1p(exp(-|theta|)) - x theta so neither tail
// overflows.  Requires X strictly 0/1.
struct BinaryCost {
  double total = 0.0;
  double mean = 0.0;  // total / (n p)
};
BinaryCost binary_cost(const Matrix& x, const Matrix& f, const Matrix& g);

// One damped, projected Newton sweep on G:
//   D1 = (sigmoid(F G^T) - X)^T F
//   D2 = (sigmoid(F G^T) .* (1 - sigmoid(F G^T)))^T (F .* F)
//   G <- max(G - eta * D1 ./ max(D2, floor), 0)
// X may be real-valued here; only the full solver insists on binary data.
Matrix newton_update_g(const Matrix& x, const Matrix& f, const Matrix& g,
                       double eta, double hessian_floor = 1e-12);

// Gradient of the negative log-likelihood in F: (sigmoid(F G^T) - X) G.
Matrix gradient_f_binary(const Matrix& x, const Matrix& f, const Matrix& g);

// Alternates the damped Newton G sweep with the curvilinear F search on the
// Bernoulli objective.  G starts from max(X^T F0, 0).
FactorizationResult factorize_binary(const Matrix& x, const BinaryOptions& opts,
                                     const IterationObserver& observer = {});

}  // namespace sonmf
