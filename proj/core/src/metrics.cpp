#include "sonmf/metrics.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sonmf/binary.hpp"
#include "sonmf/decompose.hpp"

namespace sonmf {

double average_residual(const Matrix& x, const Matrix& f, const Matrix& g) {
  require(x.rows() == f.rows() && x.cols() == g.rows() && f.cols() == g.cols(),
          "average_residual: inconsistent shapes");
  return (x - f * g.transpose()).squaredNorm() /
         static_cast<double>(x.rows() * x.cols());
}

double orthogonal_residual(const Matrix& f) {
  const Index k = f.cols();
  return (f.transpose() * f - Matrix::Identity(k, k)).squaredNorm();
}

namespace {

Matrix projector(const Matrix& a, bool* ridged) {
  const Matrix ata = a.transpose() * a;
  Matrix inv;
  try {
    inv = invert_small(ata);
  } catch (const SingularMatrixError&) {
    // Rank-deficient estimate: ridge the Gram matrix and invert it directly.
    // The ridged matrix is positive definite by construction, but its
    // condition number may still exceed the gate used for the exact path.
    const Matrix lifted =
        ata + 1e-12 * Matrix::Identity(ata.rows(), ata.cols());
    inv = Eigen::PartialPivLU<Matrix>(lifted).inverse();
    if (ridged) *ridged = true;
  }
  return a * inv * a.transpose();
}

}  // namespace

double subspace_error(const Matrix& a, const Matrix& b, bool* ridged) {
  require(a.rows() == b.rows(), "subspace_error: row counts differ");
  if (ridged) *ridged = false;
  return (projector(a, ridged) - projector(b, ridged)).squaredNorm();
}

double sparsity_pct(const Matrix& m) {
  long zeros = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) <= kZeroTol) ++zeros;
  return 100.0 * static_cast<double>(zeros) /
         static_cast<double>(m.rows() * m.cols());
}

double probability_error(const Matrix& p_true, const Matrix& f,
                         const Matrix& g) {
  require(p_true.rows() == f.rows() && p_true.cols() == g.rows(),
          "probability_error: inconsistent shapes");
  return (p_true - sigmoid_matrix(f * g.transpose())).squaredNorm();
}

ThresholdCrossing iterations_to_threshold(const std::vector<double>& trace,
                                          double threshold) {
  ThresholdCrossing out;
  for (size_t j = 1; j < trace.size(); ++j) {
    const double decrease = trace[j - 1] - trace[j];
    if (decrease >= 0.0 && decrease <= threshold) {
      out.iterations = static_cast<int>(j) + 1;
      out.reached = true;
      return out;
    }
  }
  out.iterations = static_cast<int>(trace.size());
  out.reached = false;
  return out;
}

std::string metrics_json(const MetricsRecord& m) {
  nlohmann::json j;
  const auto set = [&j](const char* key, const std::optional<double>& v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  set("average_residual", m.average_residual);
  set("mean_cost", m.mean_cost);
  set("orthogonal_residual", m.orthogonal_residual);
  set("eps_f", m.eps_f);
  set("eps_g", m.eps_g);
  set("eps_p", m.eps_p);
  j["sparsity_f_pct"] = m.sparsity_f_pct;
  j["sparsity_g_pct"] = m.sparsity_g_pct;
  j["iterations_to_threshold"] = m.iterations_to_threshold;
  j["threshold_reached"] = m.threshold_reached;
  j["elapsed_seconds"] = m.elapsed_seconds;
  return j.dump();
}

}  // namespace sonmf
