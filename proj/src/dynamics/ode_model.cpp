#include "liftrom/dynamics/ode_model.hpp"

namespace liftrom {

void OdeModel::jacobian_dense(double t, const Vector& x, Matrix& jac) const {
  SparseMatrix s;
  jacobian_sparse(t, x, s);
  jac = Matrix(s);
}

void OdeModel::jacobian_sparse(double t, const Vector& x, SparseMatrix& jac) const {
  Matrix d;
  jacobian_dense(t, x, d);
  jac = d.sparseView();
}

}  // namespace liftrom
