#pragma once

#include <optional>
#include <string>

#include "sonmf/matrix.hpp"

namespace sonmf {

// ||X - F G^T||_F^2 / (n p): the per-entry reconstruction error.
double average_residual(const Matrix& x, const Matrix& f, const Matrix& g);

// ||F^T F - I||_F^2: deviation of F from column orthonormality.
double orthogonal_residual(const Matrix& f);

// ||H_A - H_B||_F^2 with H = A (A^T A)^{-1} A^T, basis independent.  When
// A^T A is numerically singular a ridge of 1e-12 I is added and *ridged (if
// non-null) is set.
double subspace_error(const Matrix& a, const Matrix& b, bool* ridged = nullptr);

// Percentage of entries with |v| <= 1e-10 (multiplicative methods park zeros
// at a small positive floor, which should still count).
double sparsity_pct(const Matrix& m);

// ||P_true - sigmoid(F G^T)||_F^2 for probability-recovery studies.
double probability_error(const Matrix& p_true, const Matrix& f,
                         const Matrix& g);

// Everything a study records about one solver run.  Optional fields stay
// empty when a metric is meaningless for the method (orthogonality for
// semi-NMF, probability error for least-squares runs, ...).
struct MetricsRecord {
  std::optional<double> average_residual;
  std::optional<double> mean_cost;  // Bernoulli NLL / (n p)
  std::optional<double> orthogonal_residual;
  std::optional<double> eps_f;  // subspace error of recovered F
  std::optional<double> eps_g;  // subspace error of recovered G
  std::optional<double> eps_p;  // probability error
  double sparsity_f_pct = 0.0;
  double sparsity_g_pct = 0.0;
  double iterations_to_threshold = 0.0;
  bool threshold_reached = true;
  double elapsed_seconds = 0.0;
};

std::string metrics_json(const MetricsRecord& m);

// First outer iteration at which the decrease of the normalized objective
// trace lands in [0, 1e-4] (trace[j] is the value after iteration j + 1).
// Returns {trace size, false} when the threshold never fires.
struct ThresholdCrossing {
  int iterations = 0;
  bool reached = false;
};
ThresholdCrossing iterations_to_threshold(const std::vector<double>& trace,
                                          double threshold = 1e-4);

}  // namespace sonmf
