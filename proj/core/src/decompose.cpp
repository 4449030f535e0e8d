#include "sonmf/decompose.hpp"

#include <algorithm>
#include <cmath>

#include "sonmf/random.hpp"

namespace sonmf {

namespace {

// Flip each column of U so its largest-magnitude entry is positive, mirroring
// the flip into V so the product is unchanged.
void fix_signs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    double best = 0.0;
    for (Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }
}

SvdTruncation dense_svd(const Matrix& x, Index k) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdTruncation out;
  out.u = svd.matrixU().leftCols(k);
  out.d = svd.singularValues().head(k);
  out.v = svd.matrixV().leftCols(k);
  fix_signs(out.u, out.v);
  return out;
}

SvdTruncation subspace_svd(const Matrix& x, Index k) {
  const Index p = x.rows();
  // Fixed internal seed keyed on the shape keeps repeated calls bit-identical.
  const std::uint64_t seed =
      mix_seed(0x5fd1ull, static_cast<std::uint64_t>(p * 131071 + x.cols() * 331 + k));
  Matrix q = random_orthonormal(p, k, seed);

  Vector sv = Vector::Zero(k);
  const int max_sweeps = 1000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Matrix v = qr_orthonormalize(x.transpose() * q);
    Matrix z = x * v;
    Eigen::HouseholderQR<Matrix> qr(z);
    q = qr.householderQ() * Matrix::Identity(p, k);
    Vector sv_next = qr.matrixQR().diagonal().head(k).cwiseAbs();
    std::sort(sv_next.data(), sv_next.data() + k, std::greater<double>());
    if ((sv_next - sv).cwiseAbs().maxCoeff() <= 1e-9) {
      sv = sv_next;
      break;
    }
    sv = sv_next;
  }

  // Rayleigh-Ritz finish: exact SVD of the small projected matrix.
  Matrix b = q.transpose() * x;  // k x n
  Eigen::JacobiSVD<Matrix> small(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdTruncation out;
  out.u = q * small.matrixU();
  out.d = small.singularValues();
  out.v = small.matrixV();
  fix_signs(out.u, out.v);
  return out;
}

}  // namespace

SvdTruncation truncated_svd(const Matrix& x, Index k) {
  require(k >= 1, "truncated_svd: k must be at least 1");
  require(k <= std::min(x.rows(), x.cols()),
          "truncated_svd: k exceeds min(rows, cols)");
  check_finite(x, "X");
  if (std::min(x.rows(), x.cols()) <= 64) return dense_svd(x, k);
  return subspace_svd(x, k);
}

Matrix qr_orthonormalize(const Matrix& a) {
  require(a.rows() >= a.cols() && a.cols() >= 1,
          "qr_orthonormalize: need rows >= cols >= 1");
  const Index k = a.cols();
  double max_col = 0.0;
  for (Index j = 0; j < k; ++j) max_col = std::max(max_col, a.col(j).norm());

  Eigen::HouseholderQR<Matrix> qr(a);
  const Vector rdiag = qr.matrixQR().diagonal().head(k).cwiseAbs();
  for (Index j = 0; j < k; ++j)
    if (!(rdiag(j) > 1e-12 * max_col))
      throw RankDeficiencyError("qr_orthonormalize: rank-deficient input");
  return qr.householderQ() * Matrix::Identity(a.rows(), k);
}

Matrix invert_small(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() >= 1,
          "invert_small: matrix must be square");
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rc = lu.rcond();
  // NaN rcond (overflowed input) must also land here.
  if (!(rc > 1e-12))
    throw SingularMatrixError("invert_small: condition number above 1e12");
  return lu.inverse();
}

}  // namespace sonmf
