#include "sonmf/continuous.hpp"

#include <chrono>

#include "sonmf/decompose.hpp"
#include "sonmf/kmeans.hpp"
#include "sonmf/metrics.hpp"
#include "sonmf/random.hpp"

namespace sonmf {

InitMode init_mode_from_string(const std::string& name) {
  if (name == "svd") return InitMode::svd;
  if (name == "kmeans") return InitMode::kmeans;
  if (name == "random") return InitMode::random;
  throw DimensionError("unknown init mode: " + name);
}

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::svd: return "svd";
    case InitMode::kmeans: return "kmeans";
    case InitMode::random: return "random";
  }
  return "?";
}

Matrix init_f_svd(const Matrix& x, Index k) {
  return truncated_svd(x, k).u;
}

Matrix init_f_kmeans(const Matrix& x, Index k, std::uint64_t seed) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    const KMeansResult km = kmeans_columns(x, k, seed + static_cast<std::uint64_t>(attempt));
    try {
      return qr_orthonormalize(km.centroids);
    } catch (const RankDeficiencyError&) {
      if (attempt == 4) throw;
    }
  }
  throw RankDeficiencyError("init_f_kmeans: centroids stayed rank deficient");
}

Matrix init_f_random(const Matrix& x, Index k, std::uint64_t seed) {
  return random_orthonormal(x.rows(), k, seed);
}

Matrix init_f(const Matrix& x, Index k, InitMode mode, std::uint64_t seed) {
  require(k >= 1 && k <= std::min(x.rows(), x.cols()),
          "init_f: need 1 <= k <= min(p, n)");
  switch (mode) {
    case InitMode::svd: return init_f_svd(x, k);
    case InitMode::kmeans: return init_f_kmeans(x, k, seed);
    case InitMode::random: return init_f_random(x, k, seed);
  }
  throw DimensionError("init_f: bad mode");
}

Matrix update_g(const Matrix& x, const Matrix& f) {
  require(x.rows() == f.rows(), "update_g: X and F row counts differ");
  if (orthogonal_residual(f) > 1e-8)
    throw ValidationError("update_g: F is not orthonormal");
  return (x.transpose() * f).cwiseMax(0.0);
}

Matrix gradient_f(const Matrix& x, const Matrix& f, const Matrix& g) {
  require(x.rows() == f.rows() && x.cols() == g.rows() && f.cols() == g.cols(),
          "gradient_f: inconsistent shapes");
  return 2.0 * (f * (g.transpose() * g)) - 2.0 * (x * g);
}

Matrix cayley_step(const Matrix& f, const Matrix& grad, double tau) {
  require(f.rows() == grad.rows() && f.cols() == grad.cols(),
          "cayley_step: F and gradient shapes differ");
  const Index p = f.rows();
  const Index k = f.cols();

  Matrix u(p, 2 * k);
  u.leftCols(k) = grad;
  u.rightCols(k) = f;
  Matrix v(p, 2 * k);
  v.leftCols(k) = f;
  v.rightCols(k) = -grad;

  const Matrix m =
      Matrix::Identity(2 * k, 2 * k) + (tau / 2.0) * (v.transpose() * u);
  const Matrix inner = invert_small(m);  // may throw SingularMatrixError
  return f - tau * (u * (inner * (v.transpose() * f)));
}

LineSearchResult line_search_f(const Matrix& f, const Matrix& grad,
                               double cost_current,
                               const std::function<double(const Matrix&)>& cost_at,
                               double tau, int max_halvings, double tau_cap) {
  LineSearchResult res;
  for (int h = 0; h <= max_halvings; ++h) {
    res.halvings = h;
    Matrix y;
    try {
      y = cayley_step(f, grad, tau);
    } catch (const SingularMatrixError&) {
      tau /= 2.0;
      continue;
    }
    const double cost_y = cost_at(y);
    if (cost_current - cost_y > 0.0) {
      res.f = std::move(y);
      res.cost = cost_y;
      res.tau_next = std::min(2.0 * tau, tau_cap);
      res.accepted = true;
      return res;
    }
    tau /= 2.0;
  }
  res.f = f;
  res.cost = cost_current;
  res.tau_next = tau;
  res.accepted = false;
  return res;
}

FactorizationResult factorize_continuous(const Matrix& x,
                                         const ContinuousOptions& opts,
                                         const IterationObserver& observer) {
  check_finite(x, "X");
  require(opts.max_iters >= 1, "factorize_continuous: max_iters must be >= 1");
  require(opts.epsilon >= 0.0, "factorize_continuous: epsilon must be >= 0");
  require(opts.tau > 0.0, "factorize_continuous: tau must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  FactorizationResult res;
  res.f = init_f(x, opts.k, opts.init, opts.seed);
  res.max_orth_residual = orthogonal_residual(res.f);

  const auto cost_with = [&x](const Matrix& f, const Matrix& g) {
    return (x - f * g.transpose()).squaredNorm();
  };

  double tau = opts.tau;
  double prev_obj = 0.0;
  bool have_prev = false;
  int accepted_steps = 0;
  res.termination = Termination::max_iters;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    res.g = update_g(x, res.f);
    const double cost_g = cost_with(res.f, res.g);

    const auto cost_at = [&](const Matrix& f) { return cost_with(f, res.g); };
    const Matrix grad = gradient_f(x, res.f, res.g);
    LineSearchResult ls = line_search_f(res.f, grad, cost_g, cost_at, tau,
                                        opts.max_halvings, opts.tau_cap);
    res.f = std::move(ls.f);
    tau = ls.tau_next;
    if (ls.accepted) ++accepted_steps;

    res.max_orth_residual =
        std::max(*res.max_orth_residual, orthogonal_residual(res.f));
    res.objective_trace.push_back(ls.cost);
    res.iterations = iter;
    if (observer) observer(iter, res.f, res.g);

    if (have_prev) {
      const double decrease = prev_obj - ls.cost;
      if (decrease >= 0.0 && decrease <= opts.epsilon) {
        res.termination = Termination::threshold;
        break;
      }
    }
    prev_obj = ls.cost;
    have_prev = true;
  }

  if (accepted_steps == 0) res.termination = Termination::stalled;
  res.g = update_g(x, res.f);
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace sonmf
