#pragma once

#include "liftrom/dynamics/polynomial_system.hpp"

#include <optional>
#include <vector>

namespace liftrom {

/// x' = A x + B u + G2 x^(2) + G3 x^(3) + G4 x^(4) + sum_k u_k (N1_k x + N2_k x^(2)).
struct QuarticSystem {
  SparseMatrix A;
  Matrix B;
  MatricizedTensor G2, G3, G4;
  std::vector<SparseMatrix> N1;
  std::vector<MatricizedTensor> N2;
  Layout layout;

  Index dim() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  void validate() const;
  PolynomialSystem to_polynomial() const;
};

/// Index-1 block structure of a QB-DAE:
///   E11 x1' = A11 x1 + A12 x2 + B1 u + H1 (x (x) x) + sum_k u_k (N11_k x1 + N12_k x2)
///        0  = x2 - H2 (x1 (x) x1)
/// H1 acts on the full state x = [x1; x2]; H2 is the constraint map.
struct QBBlocks {
  Index n1 = 0;
  Index n2 = 0;
  SparseMatrix E11;
  SparseMatrix A11, A12;
  Matrix B1;
  MatricizedTensor H1;
  MatricizedTensor H2;
  std::vector<SparseMatrix> N11, N12;

  Index inputs() const { return B1.cols(); }
  void validate() const;
};

/// E x' = A x + B u + H x^(2) + sum_k u_k N_k x, with optional block partition.
struct QBSystem {
  SparseMatrix E;  ///< empty means identity
  SparseMatrix A;
  Matrix B;
  MatricizedTensor H;
  std::vector<SparseMatrix> N;
  Layout layout;
  std::optional<QBBlocks> blocks;

  Index dim() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  void validate() const;
  PolynomialSystem to_polynomial() const;

  /// Full operators assembled from a block structure (blocks are kept).
  static QBSystem from_blocks(QBBlocks blocks, Layout layout);
};

Vector eval_rhs_quartic(const QuarticSystem& sys, const Vector& x, const Vector& u);
/// Right-hand side only; the E x' side is not applied.
Vector eval_rhs_qb(const QBSystem& sys, const Vector& x, const Vector& u);

/// x2 - H2 (x1 (x) x1) for a partitioned state.
Vector algebraic_residual(const QBBlocks& blocks, const Vector& x);

/// Block-diagonal sparse matrix.
SparseMatrix block_diag(const std::vector<SparseMatrix>& blocks);
SparseMatrix sparse_identity(Index n, double scale = 1.0);

}  // namespace liftrom
