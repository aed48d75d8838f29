#include "liftrom/tensor/linalg.hpp"

#include "liftrom/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace liftrom {

namespace {

void require_finite(const Matrix& x, const char* who) {
  if (!x.allFinite()) throw DomainError(std::string(who) + ": input contains non-finite entries");
}

}  // namespace

SVDResult thin_svd(const Matrix& x) {
  require_finite(x, "thin_svd");
  if (x.size() == 0) {
    return {Matrix(x.rows(), 0), Vector(0), Matrix(x.cols(), 0)};
  }
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Index numerical_rank(const Vector& sigma, Index rows, Index cols) {
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * sigma[0];
  Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > tol) ++rank;
  return rank;
}

Matrix method_of_snapshots(const Matrix& x, Index r) {
  require_finite(x, "method_of_snapshots");
  if (r < 0 || r > std::min(x.rows(), x.cols())) {
    throw DimensionError("method_of_snapshots: r = " + std::to_string(r) +
                         " exceeds min(rows, cols) = " +
                         std::to_string(std::min(x.rows(), x.cols())));
  }
  const Matrix gram = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw Error("method_of_snapshots: eigensolver failed");

  // Eigenvalues come out ascending; lambda = sigma^2 carries ~eps*lambda_max
  // absolute error, so sigma is only resolved down to sqrt(eps)*sigma_1.
  const Index m = gram.rows();
  const Vector lambda = eig.eigenvalues();
  const double lambda_max = std::max(lambda[m - 1], 0.0);
  const double tol = 10.0 * static_cast<double>(m) * std::numeric_limits<double>::epsilon() *
                     lambda_max;
  Index rank = 0;
  for (Index i = m - 1; i >= 0 && lambda[i] > tol; --i) ++rank;
  if (r > rank) {
    throw RankError("method_of_snapshots: requested r = " + std::to_string(r) +
                        " exceeds numerical rank " + std::to_string(rank),
                    rank);
  }

  Matrix basis(x.rows(), r);
  for (Index j = 0; j < r; ++j) {
    const Index col = m - 1 - j;
    const double sigma = std::sqrt(lambda[col]);
    basis.col(j) = x * eig.eigenvectors().col(col) / sigma;
  }
  // One re-orthonormalization pass: the Gram route loses orthogonality in
  // proportion to cond(X)^2 * eps.
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), r);
  for (Index j = 0; j < r; ++j) {
    if (q.col(j).dot(basis.col(j)) < 0) q.col(j) *= -1.0;
  }
  return q;
}

double subspace_angle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("subspace_angle: row mismatch");
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  // sin of the largest angle = || (I - A A^T) B ||_2 for orthonormal A, B.
  const Matrix residual = b - a * (a.transpose() * b);
  Eigen::JacobiSVD<Matrix> svd(residual);
  const double s = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  return std::asin(std::min(1.0, s));
}

double orthonormality_defect(const Matrix& q) {
  if (q.cols() == 0) return 0.0;
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace liftrom
