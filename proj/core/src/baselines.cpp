#include "sonmf/baselines.hpp"

#include <chrono>
#include <cmath>

#include "sonmf/binary.hpp"
#include "sonmf/decompose.hpp"
#include "sonmf/kmeans.hpp"
#include "sonmf/random.hpp"

namespace sonmf {

BaselineMethod baseline_from_string(const std::string& name) {
  if (name == "nmf") return BaselineMethod::nmf_mu;
  if (name == "onmf") return BaselineMethod::onmf;
  if (name == "semi") return BaselineMethod::semi;
  if (name == "lognmf") return BaselineMethod::lognmf;
  throw DimensionError("unknown baseline: " + name);
}

std::string to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::nmf_mu: return "nmf";
    case BaselineMethod::onmf: return "onmf";
    case BaselineMethod::semi: return "semi";
    case BaselineMethod::lognmf: return "lognmf";
  }
  return "?";
}

namespace {

// (|M| + M) / 2 and (|M| - M) / 2.
Matrix positive_part(const Matrix& m) { return (m.cwiseAbs() + m) / 2.0; }
Matrix negative_part(const Matrix& m) { return (m.cwiseAbs() - m) / 2.0; }

}  // namespace

void nmf_mu_step(const Matrix& x, Matrix& f, Matrix& g, double floor) {
  const Matrix xg = x * g;
  const Matrix fgg = f * (g.transpose() * g);
  f = f.cwiseProduct(xg.cwiseQuotient(fgg.cwiseMax(floor))).cwiseMax(floor);

  const Matrix xtf = x.transpose() * f;
  const Matrix gff = g * (f.transpose() * f);
  g = g.cwiseProduct(xtf.cwiseQuotient(gff.cwiseMax(floor))).cwiseMax(floor);
}

void onmf_step(const Matrix& x, Matrix& f, Matrix& g, double floor) {
  // Column-wise sweep over F: each unit column is refit against the residual
  // that excludes its own contribution, clipped to the nonnegative orthant and
  // renormalized, which drives F toward a sparse near-orthonormal basis.
  const Matrix xg = x * g;
  Matrix resid;
  bool have_resid = false;  // built lazily, at most once per sweep
  for (Index j = 0; j < f.cols(); ++j) {
    const Vector v = xg.col(j);
    const Vector coeff = f.transpose() * v;
    Vector vp = (v - f * coeff + f.col(j) * coeff(j)).cwiseMax(0.0);
    double nrm = vp.norm();
    if (nrm <= floor) {
      // Dead column: reseed from the data column with the largest positive
      // residual mass so the factor keeps its full rank.
      if (!have_resid) {
        resid = x - f * g.transpose();
        have_resid = true;
      }
      Index best = 0;
      double best_norm = -1.0;
      for (Index c = 0; c < resid.cols(); ++c) {
        const double cn = resid.col(c).cwiseMax(0.0).norm();
        if (cn > best_norm) {
          best_norm = cn;
          best = c;
        }
      }
      vp = resid.col(best).cwiseMax(0.0);
      nrm = vp.norm();
    }
    if (nrm > floor) f.col(j) = vp / nrm;
  }

  // Column-wise least-squares updates of G against the refreshed F.
  const Matrix xtf = x.transpose() * f;
  const Matrix ftf = f.transpose() * f;
  for (Index j = 0; j < g.cols(); ++j) {
    const Vector u = xtf.col(j) - g * ftf.col(j) + g.col(j) * ftf(j, j);
    g.col(j) = (u / std::max(ftf(j, j), floor)).cwiseMax(floor);
  }
}

void semi_step(const Matrix& x, Matrix& f, Matrix& g, double floor,
               double ridge) {
  // Least-squares F given G, with a small ridge when G^T G is near singular.
  const Matrix gtg = g.transpose() * g;
  Matrix inv;
  try {
    inv = invert_small(gtg);
  } catch (const SingularMatrixError&) {
    inv = invert_small(
        gtg + ridge * Matrix::Identity(gtg.rows(), gtg.cols()));
  }
  f = x * g * inv;

  const Matrix a = x.transpose() * f;   // n x k
  const Matrix b = f.transpose() * f;   // k x k
  const Matrix num = positive_part(a) + g * negative_part(b);
  const Matrix den = negative_part(a) + g * positive_part(b);
  g = g.cwiseProduct(
           num.cwiseQuotient(den.cwiseMax(floor)).cwiseSqrt())
          .cwiseMax(floor);
}

void lognmf_step(const Matrix& x, Matrix& f, Matrix& g, double step) {
  // Simultaneous likelihood-ascent step; F stays in the nonnegative orthant.
  const Matrix r = x - sigmoid_matrix(f * g.transpose());
  const Matrix df = r * g;
  const Matrix dg = r.transpose() * f;
  f = (f + step * df).cwiseMax(0.0);
  g = g + step * dg;
}

FactorizationResult factorize_baseline(const Matrix& x, BaselineMethod method,
                                       const BaselineOptions& opts,
                                       const IterationObserver& observer) {
  check_finite(x, "X");
  require(opts.max_iters >= 1, "factorize_baseline: max_iters must be >= 1");
  require(opts.k >= 1 && opts.k <= std::min(x.rows(), x.cols()),
          "factorize_baseline: need 1 <= k <= min(p, n)");
  // nmf/onmf accept mildly negative data: the delta floor keeps their
  // state positive, so noisy inputs that dip below zero remain usable.
  if (method == BaselineMethod::lognmf) check_binary(x, "X");
  const auto t0 = std::chrono::steady_clock::now();

  const Index k = opts.k;
  FactorizationResult res;
  switch (method) {
    case BaselineMethod::nmf_mu:
    case BaselineMethod::onmf: {
      const Matrix f0 = truncated_svd(x, k).u;
      res.f = f0.cwiseMax(opts.floor);
      res.g = (x.transpose() * res.f).cwiseMax(opts.floor);
      break;
    }
    case BaselineMethod::semi: {
      const KMeansResult km = kmeans_columns(x, k, opts.seed);
      res.f = km.centroids;
      res.g = Matrix::Constant(x.cols(), k, 0.2);
      for (Index j = 0; j < x.cols(); ++j)
        res.g(j, km.assignment[static_cast<size_t>(j)]) += 1.0;
      break;
    }
    case BaselineMethod::lognmf: {
      res.f = random_uniform(x.rows(), k, 0.0, 1.0, mix_seed(opts.seed, 11));
      res.g = random_normal(x.cols(), k, 0.0, 1.0, mix_seed(opts.seed, 12));
      break;
    }
  }

  const bool likelihood = (method == BaselineMethod::lognmf);
  const auto objective = [&]() {
    if (likelihood) return binary_cost(x, res.f, res.g).total;
    return (x - res.f * res.g.transpose()).squaredNorm();
  };

  double prev_obj = 0.0;
  bool have_prev = false;
  res.termination = Termination::max_iters;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    switch (method) {
      case BaselineMethod::nmf_mu:
        nmf_mu_step(x, res.f, res.g, opts.floor);
        break;
      case BaselineMethod::onmf:
        onmf_step(x, res.f, res.g, opts.floor);
        break;
      case BaselineMethod::semi:
        semi_step(x, res.f, res.g, opts.floor, opts.ridge);
        break;
      case BaselineMethod::lognmf:
        lognmf_step(x, res.f, res.g, opts.step);
        break;
    }
    const double obj = objective();
    res.objective_trace.push_back(obj);
    res.iterations = iter;
    if (observer) observer(iter, res.f, res.g);

    if (have_prev) {
      const double decrease = prev_obj - obj;
      if (decrease >= 0.0 && decrease <= opts.epsilon) {
        res.termination = Termination::threshold;
        break;
      }
    }
    prev_obj = obj;
    have_prev = true;
  }

  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace sonmf
