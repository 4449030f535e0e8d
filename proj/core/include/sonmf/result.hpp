#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sonmf/matrix.hpp"

namespace sonmf {

enum class Termination {
  threshold,  // objective decrease fell inside [0, epsilon]
  max_iters,  // iteration budget exhausted
  stalled,    // no update step was ever accepted
};

std::string to_string(Termination t);

struct FactorizationResult {
  Matrix f;  // p x k, mixed sign (nonnegative for some baselines)
  Matrix g;  // n x k, nonnegative unless the method says otherwise

  // Raw objective after each outer iteration: squared Frobenius residual for
  // least-squares methods, total negative log-likelihood for Bernoulli ones.
  std::vector<double> objective_trace;

  int iterations = 0;
  Termination termination = Termination::max_iters;
  double elapsed_seconds = 0.0;

  // Worst ||F^T F - I||_F^2 seen across iterations; only tracked by methods
  // that promise an orthonormal F.
  std::optional<double> max_orth_residual;
};

// Called after every outer iteration with the current state.  Observers power
// per-iteration diagnostics (probability-error traces and the like) without
// the solvers growing study-specific knobs.
using IterationObserver =
    std::function<void(int iteration, const Matrix& f, const Matrix& g)>;

// JSON fragment used by run manifests and study summaries (does not embed the
// factor matrices; those travel as Matrix Market files).
std::string result_stats_json(const FactorizationResult& r);

}  // namespace sonmf
