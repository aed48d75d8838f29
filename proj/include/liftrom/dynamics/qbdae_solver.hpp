#pragma once

#include "liftrom/dynamics/input.hpp"
#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/dynamics/systems.hpp"

namespace liftrom {

/// Index-1 QB-DAE reduced to an ODE in x1 by evaluating
/// x2 = H2 (x1 (x) x1) inside every right-hand-side call.
class SubstitutedQBDAEModel final : public OdeModel {
 public:
  SubstitutedQBDAEModel(QBBlocks blocks, InputSignal input);

  Index dim() const override { return b_.n1; }
  const SparseMatrix* mass() const override { return identity_mass_ ? nullptr : &b_.E11; }
  void rhs(double t, const Vector& x1, Vector& f) const override;
  void jacobian_dense(double t, const Vector& x1, Matrix& jac) const override;
  void jacobian_sparse(double t, const Vector& x1, SparseMatrix& jac) const override;
  const SparseMatrix* linear_part() const override { return &b_.A11; }

  /// [x1; H2 (x1 (x) x1)].
  Vector full_state(const Vector& x1) const;
  const QBBlocks& blocks() const { return b_; }

 private:
  QBBlocks b_;
  InputSignal input_;
  bool identity_mass_;
};

/// Integrates a partitioned QB-DAE from x1(t0) = x1_0; the returned trajectory
/// holds x1 and the reconstructed x2 under the system layout.
Trajectory solve_qbdae(const QBSystem& sys, const Vector& x1_0, const InputSignal& input,
                       double t0, std::span<const double> times,
                       const IntegratorOptions& opts = {}, IntegratorStats* stats = nullptr);

}  // namespace liftrom
