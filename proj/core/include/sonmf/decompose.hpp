#pragma once

#include "sonmf/matrix.hpp"

namespace sonmf {

// Rank-k truncated SVD, X ~ U * D.asDiagonal() * V^T with U^T U = V^T V = I_k
// and D nonincreasing.  Column signs are fixed so the largest-magnitude entry
// of each U column is positive.
struct SvdTruncation {
  Matrix u;  // rows(X) x k
  Vector d;  // k
  Matrix v;  // cols(X) x k
};

// Dense Jacobi SVD when min(rows, cols) <= 64; blocked subspace iteration with
// a Rayleigh-Ritz finish otherwise (tolerance 1e-9 on singular-value change,
// at most 1000 sweeps).  Deterministic: the iteration starts from a draw
// seeded only by the problem dimensions.
SvdTruncation truncated_svd(const Matrix& x, Index k);

// Thin Q of a Householder QR.  Throws RankDeficiencyError when a diagonal of
// R falls below 1e-12 times the largest column norm of the input.
Matrix qr_orthonormalize(const Matrix& a);

// Inverse of a small square system via partial-pivot LU.  Throws
// SingularMatrixError when the reciprocal condition estimate drops below
// 1e-12 (or is NaN, which overflowed inputs produce).
Matrix invert_small(const Matrix& m);

}  // namespace sonmf
