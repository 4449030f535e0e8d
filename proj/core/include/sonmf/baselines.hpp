#pragma once

#include <cstdint>

#include "sonmf/result.hpp"

namespace sonmf {

enum class BaselineMethod {
  nmf_mu,  // multiplicative updates for ||X - F G^T||^2, F, G >= 0
  onmf,    // multiplicative updates with an orthogonality-promoting F rule
  semi,    // least-squares F (mixed sign), multiplicative nonnegative G
  lognmf,  // Bernoulli likelihood ascent, F >= 0, G unconstrained
};

BaselineMethod baseline_from_string(const std::string& name);
std::string to_string(BaselineMethod m);

struct BaselineOptions {
  Index k = 2;
  int max_iters = 500;
  double epsilon = 1e-4;
  std::uint64_t seed = 0;
  double step = 0.001;    // gradient step for lognmf
  double floor = 1e-10;   // multiplicative-state floor (avoids zero locking)
  double ridge = 1e-10;   // regularizer for the semi-NMF least-squares solve
};

// One full update sweep (F rule then G rule) for each method.  States passed
// in must satisfy each method's sign conventions; outputs do.
void nmf_mu_step(const Matrix& x, Matrix& f, Matrix& g, double floor);
void onmf_step(const Matrix& x, Matrix& f, Matrix& g, double floor);
void semi_step(const Matrix& x, Matrix& f, Matrix& g, double floor,
               double ridge);
void lognmf_step(const Matrix& x, Matrix& f, Matrix& g, double step);

// Runs the selected baseline from its published initialization:
//   nmf_mu / onmf: floored truncated-SVD factors,
//   semi:          k-means centroids and indicator + 0.2,
//   lognmf:        F ~ U(0,1), G ~ N(0,1).
// Objective traces are squared Frobenius residuals, except lognmf which
// records the total Bernoulli negative log-likelihood.
FactorizationResult factorize_baseline(const Matrix& x, BaselineMethod method,
                                       const BaselineOptions& opts,
                                       const IterationObserver& observer = {});

}  // namespace sonmf
