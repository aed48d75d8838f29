#include "liftrom/dynamics/polynomial_system.hpp"

#include "liftrom/errors.hpp"

#include <string>

namespace liftrom {

namespace {

void check_tensor(const MatricizedTensor& t, Index n, const char* what) {
  if (t.out_dim() != n) throw DimensionError(std::string(what) + ": output dimension mismatch");
  for (Index d : t.in_dims()) {
    if (d != n) throw DimensionError(std::string(what) + ": input dimension mismatch");
  }
}

void check_channel(Index channel, Index m, const char* what) {
  if (channel < 0 || channel >= m) {
    throw DimensionError(std::string(what) + ": input channel out of range");
  }
}

void add_sparse(const SparseMatrix& a, double scale, Matrix& out) {
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) out(it.row(), it.col()) += scale * it.value();
  }
}

void add_sparse(const SparseMatrix& a, double scale, std::vector<Triplet>& out) {
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out.emplace_back(it.row(), it.col(), scale * it.value());
    }
  }
}

}  // namespace

void PolynomialSystem::validate() const {
  const Index n = dim();
  if (A.cols() != n) throw DimensionError("PolynomialSystem: A must be square");
  if (E.size() != 0 && (E.rows() != n || E.cols() != n)) {
    throw DimensionError("PolynomialSystem: E must be n x n");
  }
  if (B.rows() != n) throw DimensionError("PolynomialSystem: B must have n rows");
  for (const auto& t : tensors) check_tensor(t, n, "PolynomialSystem tensor");
  for (const auto& b : bilinear) {
    check_channel(b.channel, inputs(), "PolynomialSystem bilinear");
    if (b.op.rows() != n || b.op.cols() != n) {
      throw DimensionError("PolynomialSystem: bilinear operator must be n x n");
    }
  }
  for (const auto& t : input_tensors) {
    check_channel(t.channel, inputs(), "PolynomialSystem input tensor");
    check_tensor(t.op, n, "PolynomialSystem input tensor");
  }
  if (!layout.empty() && layout.total() != n) {
    throw DimensionError("PolynomialSystem: layout does not match dimension");
  }
}

Vector eval_polynomial_rhs(const PolynomialSystem& sys, const Vector& x, const Vector& u) {
  if (x.size() != sys.dim()) throw DimensionError("eval_polynomial_rhs: state dimension mismatch");
  if (u.size() != sys.inputs()) throw DimensionError("eval_polynomial_rhs: input dimension mismatch");
  Vector f = sys.A * x;
  if (sys.inputs() > 0) f.noalias() += sys.B * u;
  for (const auto& t : sys.tensors) t.add_apply_power(x, 1.0, f);
  for (const auto& b : sys.bilinear) {
    const double uk = u[b.channel];
    if (uk != 0.0) f.noalias() += uk * (b.op * x);
  }
  for (const auto& t : sys.input_tensors) {
    const double uk = u[t.channel];
    if (uk != 0.0) t.op.add_apply_power(x, uk, f);
  }
  return f;
}

void polynomial_jacobian(const PolynomialSystem& sys, const Vector& x, const Vector& u,
                         Matrix& jac) {
  const Index n = sys.dim();
  jac.setZero(n, n);
  add_sparse(sys.A, 1.0, jac);
  for (const auto& t : sys.tensors) t.add_power_jacobian(x, 1.0, jac);
  for (const auto& b : sys.bilinear) {
    if (u[b.channel] != 0.0) add_sparse(b.op, u[b.channel], jac);
  }
  for (const auto& t : sys.input_tensors) {
    if (u[t.channel] != 0.0) t.op.add_power_jacobian(x, u[t.channel], jac);
  }
}

void polynomial_jacobian(const PolynomialSystem& sys, const Vector& x, const Vector& u,
                         SparseMatrix& jac) {
  const Index n = sys.dim();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(sys.A.nonZeros()) * 2);
  add_sparse(sys.A, 1.0, trips);
  for (const auto& t : sys.tensors) t.add_power_jacobian(x, 1.0, trips);
  // Emitted regardless of u so the sparsity pattern stays fixed over time.
  for (const auto& b : sys.bilinear) add_sparse(b.op, u[b.channel], trips);
  for (const auto& t : sys.input_tensors) t.op.add_power_jacobian(x, u[t.channel], trips);
  jac.resize(n, n);
  jac.setFromTriplets(trips.begin(), trips.end());
}

PolynomialModel::PolynomialModel(PolynomialSystem sys, InputSignal input)
    : sys_(std::move(sys)), input_(std::move(input)) {
  sys_.validate();
  if (input_.channels() != sys_.inputs()) {
    throw DimensionError("PolynomialModel: input signal has " + std::to_string(input_.channels()) +
                         " channels, system expects " + std::to_string(sys_.inputs()));
  }
}

void PolynomialModel::rhs(double t, const Vector& x, Vector& f) const {
  f = eval_polynomial_rhs(sys_, x, input_(t));
}

void PolynomialModel::jacobian_dense(double t, const Vector& x, Matrix& jac) const {
  polynomial_jacobian(sys_, x, input_(t), jac);
}

void PolynomialModel::jacobian_sparse(double t, const Vector& x, SparseMatrix& jac) const {
  polynomial_jacobian(sys_, x, input_(t), jac);
}

}  // namespace liftrom
