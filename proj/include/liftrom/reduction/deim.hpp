#pragma once

#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/input.hpp"
#include "liftrom/dynamics/ode_model.hpp"
#include "liftrom/reduction/projection.hpp"

#include <memory>
#include <vector>

namespace liftrom {

/// DEIM approximation f ~ U (P^T U)^{-1} P^T f.
struct DEIMOperator {
  Matrix basis;                ///< n_g x m, leading left singular vectors of the f-snapshots
  std::vector<Index> indices;  ///< m distinct interpolation rows
  Vector sigma;                ///< singular values of the f-snapshots
  Matrix pu;                   ///< P^T U
  Eigen::PartialPivLU<Matrix> pu_lu;

  Index size() const { return basis.cols(); }
  /// DEIM approximation of a full vector from its sampled entries.
  Vector approximate(const Vector& f) const;
};

/// Greedy maximum-residual row selection; ties go to the smallest index.
std::vector<Index> deim_indices(const Matrix& u);

/// Greedy selection on a given orthonormal basis (n_g x m).
DEIMOperator deim_from_basis(Matrix basis, Vector sigma = {});

/// POD of the nonlinear snapshots truncated at r_deim, then greedy selection.
DEIMOperator deim_build(const Matrix& nonlinear_snapshots, Index r_deim);

/// Reduced operators of a POD-DEIM model of E x' = A x + B u + F g(x):
///   Er xr' = Ar xr + Br u + M g_P(Vs xr),  M = V^T F U (P^T U)^{-1},
/// where g_P evaluates only the sampled components and Vs holds the rows of
/// V those components read.
struct PodDeimRom {
  SparseMatrix E;  ///< empty means identity
  SparseMatrix A;
  Matrix A_dense;
  Matrix B;
  Matrix M;
  Matrix sampled_basis;        ///< (m * arity) x r
  std::vector<Index> indices;  ///< sampled components of g
  std::shared_ptr<const ComponentNonlinearity> g;
  Layout layout;

  Index dim() const { return A.rows(); }
  /// g at the sampled components, evaluated from the reduced state.
  Vector sampled_nonlinearity(const Vector& xr) const;
  /// Largest stored dimension, excluding the nonlinearity's component count.
  Index max_operator_dimension() const;
};

PodDeimRom build_pod_deim_rom(const GeneralNonlinearSystem& fom, const ProjectionBasis& v,
                              const DEIMOperator& deim);

class PodDeimModel final : public OdeModel {
 public:
  PodDeimModel(PodDeimRom rom, InputSignal input);

  Index dim() const override { return rom_.dim(); }
  const SparseMatrix* mass() const override { return rom_.E.size() ? &rom_.E : nullptr; }
  void rhs(double t, const Vector& x, Vector& f) const override;
  void jacobian_dense(double t, const Vector& x, Matrix& jac) const override;
  const SparseMatrix* linear_part() const override { return &rom_.A; }

  const PodDeimRom& rom() const { return rom_; }

 private:
  PodDeimRom rom_;
  InputSignal input_;
};

/// Plain POD-Galerkin model of a general system; the nonlinear term is
/// evaluated on the lifted full state every call.
class PodGalerkinModel final : public OdeModel {
 public:
  PodGalerkinModel(const GeneralNonlinearSystem& fom, const ProjectionBasis& v, InputSignal input);

  Index dim() const override { return a_.rows(); }
  const SparseMatrix* mass() const override { return e_.size() ? &e_ : nullptr; }
  void rhs(double t, const Vector& x, Vector& f) const override;
  void jacobian_dense(double t, const Vector& x, Matrix& jac) const override;
  const SparseMatrix* linear_part() const override { return &a_; }

  const Layout& layout() const { return v_.reduced_layout(); }

 private:
  ProjectionBasis v_;
  Matrix vdense_;
  SparseMatrix e_, a_;
  Matrix a_dense_, b_, vtf_;
  std::shared_ptr<const ComponentNonlinearity> g_;
  InputSignal input_;
};

}  // namespace liftrom
