#pragma once

#include "liftrom/dynamics/layout.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/tensor/matricized_tensor.hpp"

#include <span>
#include <string>
#include <vector>

namespace liftrom {

/// Block-diagonal test/trial basis V = blkdiag(V_1, ..., V_m) aligned with a
/// full-state layout. A block is either a dense orthonormal basis or the
/// identity, which is kept implicit so its dimension never enters a dense
/// product.
class ProjectionBasis {
 public:
  struct Block {
    std::string name;
    Index full_offset = 0;
    Index full_size = 0;
    Index red_offset = 0;
    Index red_size = 0;
    bool identity = false;
    Matrix v;   ///< full_size x red_size; empty for identity blocks
    Matrix vt;  ///< transpose of v, so a basis row is a contiguous column
  };

  ProjectionBasis() = default;
  /// Every variable of `full` must appear in `pod` or in `identity_vars`.
  ProjectionBasis(const Layout& full, const PODBasis& pod,
                  const std::vector<std::string>& identity_vars = {});
  static ProjectionBasis identity(const Layout& full);
  /// blkdiag(a, b) over the concatenated layouts.
  static ProjectionBasis concat(const ProjectionBasis& a, const ProjectionBasis& b);

  Index full_dim() const { return full_dim_; }
  Index reduced_dim() const { return reduced_dim_; }
  const Layout& full_layout() const { return full_layout_; }
  const Layout& reduced_layout() const { return reduced_layout_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  /// Block holding full-state index i.
  int block_of(Index i) const { return block_of_[static_cast<std::size_t>(i)]; }

  /// Dense n x r matrix.
  Matrix dense() const;
  /// V xr.
  Vector lift(const Vector& xr) const;
  /// V Xr column by column.
  Matrix lift(const Matrix& xr) const;
  /// V^T x.
  Vector restrict(const Vector& x) const;
  /// V^T M for a dense matrix with full_dim rows.
  Matrix restrict_rows(const Matrix& m) const;
  /// V^T A W.
  SparseMatrix project(const SparseMatrix& a, const ProjectionBasis& w) const;
  SparseMatrix project(const SparseMatrix& a) const { return project(a, *this); }

 private:
  void finalize();

  Layout full_layout_;
  Layout reduced_layout_;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
  Index full_dim_ = 0;
  Index reduced_dim_ = 0;
};

/// V_out^T G (V_1 (x) ... (x) V_k), assembled per nonzero of G. Entries are
/// grouped by the basis blocks their indices fall in; each group accumulates
/// into a dense block over its non-identity factors only.
MatricizedTensor project_tensor(const MatricizedTensor& g, const ProjectionBasis& out,
                                std::span<const ProjectionBasis* const> in);
/// All input factors use the same basis.
MatricizedTensor project_tensor(const MatricizedTensor& g, const ProjectionBasis& out,
                                const ProjectionBasis& in);

namespace kernels {

/// Groups are independent; the parallel form distributes them over OpenMP
/// threads and produces bitwise the same tensor as the serial reference.
MatricizedTensor project_tensor_serial(const MatricizedTensor& g, const ProjectionBasis& out,
                                       std::span<const ProjectionBasis* const> in);
MatricizedTensor project_tensor_parallel(const MatricizedTensor& g, const ProjectionBasis& out,
                                         std::span<const ProjectionBasis* const> in);

}  // namespace kernels

}  // namespace liftrom
