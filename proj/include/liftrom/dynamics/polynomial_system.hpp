#pragma once

#include "liftrom/dynamics/input.hpp"
#include "liftrom/dynamics/layout.hpp"
#include "liftrom/dynamics/ode_model.hpp"
#include "liftrom/tensor/matricized_tensor.hpp"

#include <vector>

namespace liftrom {

/// Operator multiplied by one input channel u_k.
template <class Op>
struct InputCoupled {
  Index channel = 0;
  Op op;
};

/// E x' = A x + B u + sum_T T x^(k) + sum_k u_k N_k x + sum_k u_k T_k x^(j).
///
/// Common evaluation form behind the quartic and QB containers and their
/// reduced counterparts. An empty E (0 x 0) stands for the identity.
struct PolynomialSystem {
  SparseMatrix E;
  SparseMatrix A;
  Matrix B;
  std::vector<MatricizedTensor> tensors;
  std::vector<InputCoupled<SparseMatrix>> bilinear;
  std::vector<InputCoupled<MatricizedTensor>> input_tensors;
  Layout layout;

  Index dim() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  void validate() const;
};

Vector eval_polynomial_rhs(const PolynomialSystem& sys, const Vector& x, const Vector& u);
void polynomial_jacobian(const PolynomialSystem& sys, const Vector& x, const Vector& u,
                         Matrix& jac);
void polynomial_jacobian(const PolynomialSystem& sys, const Vector& x, const Vector& u,
                         SparseMatrix& jac);

/// OdeModel adapter binding a polynomial system to an input signal.
class PolynomialModel final : public OdeModel {
 public:
  PolynomialModel(PolynomialSystem sys, InputSignal input);

  Index dim() const override { return sys_.dim(); }
  const SparseMatrix* mass() const override { return sys_.E.size() ? &sys_.E : nullptr; }
  void rhs(double t, const Vector& x, Vector& f) const override;
  void jacobian_dense(double t, const Vector& x, Matrix& jac) const override;
  void jacobian_sparse(double t, const Vector& x, SparseMatrix& jac) const override;
  const SparseMatrix* linear_part() const override { return &sys_.A; }

  const PolynomialSystem& system() const { return sys_; }

 private:
  PolynomialSystem sys_;
  InputSignal input_;
};

}  // namespace liftrom
