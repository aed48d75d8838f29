#pragma once

#include "liftrom/types.hpp"

namespace liftrom {

struct SVDResult {
  Matrix U;      ///< left singular vectors, rows x p
  Vector sigma;  ///< nonincreasing, nonnegative
  Matrix W;      ///< right singular vectors, cols x p
};

/// Thin SVD X = U diag(sigma) W^T with p = min(rows, cols).
SVDResult thin_svd(const Matrix& x);

/// Leading r left singular vectors of X via the eigendecomposition of the
/// small Gram matrix X^T X (Sirovich's method of snapshots). Intended for
/// few snapshots relative to the state dimension.
Matrix method_of_snapshots(const Matrix& x, Index r);

/// Count of singular values above max(rows, cols) * eps * sigma_1.
Index numerical_rank(const Vector& sigma, Index rows, Index cols);

/// Largest principal angle (radians) between the column spaces of two
/// matrices with orthonormal columns.
double subspace_angle(const Matrix& a, const Matrix& b);

/// max |Q^T Q - I|.
double orthonormality_defect(const Matrix& q);

}  // namespace liftrom
