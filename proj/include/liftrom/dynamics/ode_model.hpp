#pragma once

#include "liftrom/types.hpp"

namespace liftrom {

/// E x' = f(t, x) with a constant, nonsingular mass matrix E.
///
/// Subclasses override at least one of the two Jacobian forms; the other
/// defaults to a conversion.
class OdeModel {
 public:
  virtual ~OdeModel() = default;

  virtual Index dim() const = 0;
  /// nullptr means E = I.
  virtual const SparseMatrix* mass() const { return nullptr; }
  virtual void rhs(double t, const Vector& x, Vector& f) const = 0;

  virtual void jacobian_dense(double t, const Vector& x, Matrix& jac) const;
  virtual void jacobian_sparse(double t, const Vector& x, SparseMatrix& jac) const;
  /// Selects which Jacobian form the integrator requests.
  virtual bool prefers_dense() const { return dim() <= 256; }

  /// Stiff linear part L of f for linearly implicit schemes; nullptr if none.
  virtual const SparseMatrix* linear_part() const { return nullptr; }
};

}  // namespace liftrom
