#pragma once

#include "liftrom/dynamics/polynomial_system.hpp"
#include "liftrom/dynamics/systems.hpp"
#include "liftrom/reduction/projection.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace liftrom {

/// Reduced quartic operators; same container as the full system.
using ReducedQuartic = QuarticSystem;

struct QuarticProjectionOptions {
  /// The order-4 reduced tensor is r x r^4 and generally dense.
  Index max_rank = 40;
  bool allow_large = false;
};

/// Galerkin projection with W = V of every operator of a polynomial system.
PolynomialSystem project_polynomial(const PolynomialSystem& sys, const ProjectionBasis& v);
/// Unpartitioned QB projection (the partition, if any, is not carried over).
QBSystem project_qb(const QBSystem& sys, const ProjectionBasis& v);
ReducedQuartic project_quartic(const QuarticSystem& sys, const ProjectionBasis& v,
                               const QuarticProjectionOptions& opts = {});

/// Substituted ODE in x1 obtained by eliminating x2 = H2 (x1 (x) x1):
///   E11 x1' = A11 x1 + B1 u + A12H2 x1^(2) + Ht2 x1^(2) + Ht3 x1^(3) + Ht4 x1^(4)
///             + sum_k u_k (N11_k x1 + N12H2_k x1^(2)).
/// Ht2, Ht3 and Ht4 are the column blocks of Ht1 = [Ht2 | Ht3 | Ht4].
struct SubstitutedForm {
  MatricizedTensor A12H2;
  MatricizedTensor Ht2, Ht3, Ht4;
  std::vector<MatricizedTensor> N12H2;

  /// Column count of the concatenated Ht1: r1^2 + r1^3 + r1^4.
  std::uint64_t ht1_columns() const;
  std::size_t nnz() const;
};

/// Structure-preserving reduced QB-DAE. The reduced algebraic equation keeps
/// the form 0 = x2 - H2 (x1 (x) x1).
struct ReducedQBDAE {
  QBBlocks blocks;
  Layout layout;  ///< reduced layout, x1 variables then x2 variables
  std::optional<SubstitutedForm> substituted;

  Index r1() const { return blocks.n1; }
  Index r2() const { return blocks.n2; }
  /// Full reduced operators E, A, H, ... with the partition attached.
  QBSystem assembled() const;
  /// The substituted ODE as a polynomial system; requires `substituted`.
  PolynomialSystem substituted_system() const;
  /// The x1 part of the reduced layout.
  Layout x1_layout() const;
};

/// Splits a layout at offset n1 into the x1 and x2 layouts.
std::pair<Layout, Layout> split_layout(const Layout& layout, Index n1);

/// Projects a partitioned QB system with V = blkdiag(V1, V2):
///   E11 <- V1^T E11 V1, A11 <- V1^T A11 V1, A12 <- V1^T A12 V2, B1 <- V1^T B1,
///   H1 <- V1^T H1 (V (x) V), H2 <- V2^T H2 (V1 (x) V1), N11, N12 likewise.
ReducedQBDAE project_qbdae(const QBSystem& sys, const ProjectionBasis& v1,
                           const ProjectionBasis& v2);

struct SubstitutionOptions {
  /// Refuse to assemble Ht1 if its estimated storage exceeds this many bytes.
  std::uint64_t max_bytes = std::uint64_t{1} << 30;
};

/// Precomputes Ht1, A12 H2 and N12_k H2 from the reduced blocks.
ReducedQBDAE precompute_substituted_ode(ReducedQBDAE rom, const SubstitutionOptions& opts = {});

/// Estimated nonzeros of Ht1 (an upper bound: coinciding entries are counted
/// separately).
std::uint64_t substituted_nnz_estimate(const QBBlocks& blocks);

/// Largest dimension of any stored operator; a reduced model whose value is
/// below the full state dimension never touches an n-sized object online.
Index max_operator_dimension(const PolynomialSystem& sys);
Index max_operator_dimension(const QBBlocks& blocks);

}  // namespace liftrom
