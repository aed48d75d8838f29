#pragma once

#include "liftrom/dynamics/layout.hpp"
#include "liftrom/reduction/snapshots.hpp"

#include <map>
#include <string>
#include <vector>

namespace liftrom {

/// Orthonormal POD modes of one variable.
struct PODBlock {
  std::string name;
  Matrix basis;               ///< n_var x r_var, columns orthonormal
  Vector sigma;               ///< all singular values of the snapshot block
  std::vector<Index> modes;   ///< 0-based indices of the retained left singular vectors
  Index numerical_rank = 0;

  Index rank() const { return basis.cols(); }
};

/// Separate POD bases per variable, in snapshot layout order.
struct PODBasis {
  std::vector<PODBlock> blocks;

  const PODBlock& block(const std::string& name) const;
  Index total_rank() const;
  /// Layout of the reduced coordinates (one block of size r_var per variable).
  Layout reduced_layout() const;
};

/// Leading r_var modes for every variable in the snapshot set.
PODBasis compute_pod_basis(const SnapshotSet& s, const std::map<std::string, Index>& ranks);
/// Explicit 0-based mode selections per variable.
PODBasis compute_pod_basis(const SnapshotSet& s,
                           const std::map<std::string, std::vector<Index>>& modes);

/// All modes up to each block's numerical rank, for later truncation.
PODBasis compute_full_pod(const SnapshotSet& s);
/// Selects modes (indices into the full basis) per variable.
PODBasis truncate_pod(const PODBasis& full, const std::map<std::string, std::vector<Index>>& modes);
PODBasis truncate_pod(const PODBasis& full, const std::map<std::string, Index>& ranks);

/// Singular values of a snapshot block.
Vector snapshot_singular_values(const Matrix& block);

/// 0, 1, ..., r-1.
std::vector<Index> leading_modes(Index r);

}  // namespace liftrom
