#include "sonmf/binary.hpp"

#include <chrono>
#include <cmath>

#include "sonmf/metrics.hpp"

namespace sonmf {

namespace {

// Total NLL without re-validating X; both tails stay finite.
double nll_total(const Matrix& x, const Matrix& f, const Matrix& g) {
  const Matrix theta = f * g.transpose();
  double total = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      const double t = theta(i, j);
      total += std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))) -
               x(i, j) * t;
    }
  return total;
}

}  // namespace

Matrix sigmoid_matrix(const Matrix& theta) {
  return theta.unaryExpr([](double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  });
}

BinaryCost binary_cost(const Matrix& x, const Matrix& f, const Matrix& g) {
  require(x.rows() == f.rows() && x.cols() == g.rows() && f.cols() == g.cols(),
          "binary_cost: inconsistent shapes");
  check_binary(x, "X");
  BinaryCost c;
  c.total = nll_total(x, f, g);
  c.mean = c.total / static_cast<double>(x.rows() * x.cols());
  return c;
}

Matrix newton_update_g(const Matrix& x, const Matrix& f, const Matrix& g,
                       double eta, double hessian_floor) {
  require(x.rows() == f.rows() && x.cols() == g.rows() && f.cols() == g.cols(),
          "newton_update_g: inconsistent shapes");
  const Matrix p = sigmoid_matrix(f * g.transpose());
  const Matrix d1 = (p - x).transpose() * f;
  const Matrix d2 =
      (p.array() * (1.0 - p.array())).matrix().transpose() *
      f.cwiseProduct(f);
  const Matrix step = d1.cwiseQuotient(d2.cwiseMax(hessian_floor));
  return (g - eta * step).cwiseMax(0.0);
}

Matrix gradient_f_binary(const Matrix& x, const Matrix& f, const Matrix& g) {
  require(x.rows() == f.rows() && x.cols() == g.rows() && f.cols() == g.cols(),
          "gradient_f_binary: inconsistent shapes");
  return (sigmoid_matrix(f * g.transpose()) - x) * g;
}

FactorizationResult factorize_binary(const Matrix& x, const BinaryOptions& opts,
                                     const IterationObserver& observer) {
  check_binary(x, "X");
  require(opts.max_iters >= 1, "factorize_binary: max_iters must be >= 1");
  require(opts.epsilon >= 0.0, "factorize_binary: epsilon must be >= 0");
  require(opts.tau > 0.0, "factorize_binary: tau must be positive");
  require(opts.eta >= 0.0, "factorize_binary: eta must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();

  FactorizationResult res;
  res.f = init_f(x, opts.k, opts.init, opts.seed);
  res.g = (x.transpose() * res.f).cwiseMax(0.0);
  res.max_orth_residual = orthogonal_residual(res.f);

  double tau = opts.tau;
  double prev_obj = 0.0;
  bool have_prev = false;
  int accepted_steps = 0;
  res.termination = Termination::max_iters;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    res.g = newton_update_g(x, res.f, res.g, opts.eta, opts.hessian_floor);
    const double cost_g = nll_total(x, res.f, res.g);

    const auto cost_at = [&](const Matrix& f) { return nll_total(x, f, res.g); };
    const Matrix grad = gradient_f_binary(x, res.f, res.g);
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
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace sonmf
