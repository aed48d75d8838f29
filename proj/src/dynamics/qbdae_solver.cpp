#include "liftrom/dynamics/qbdae_solver.hpp"

#include "liftrom/errors.hpp"

namespace liftrom {

namespace {

bool is_identity(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return false;
  SparseMatrix id(m.rows(), m.cols());
  id.setIdentity();
  return (m - id).norm() == 0.0;
}

}  // namespace

SubstitutedQBDAEModel::SubstitutedQBDAEModel(QBBlocks blocks, InputSignal input)
    : b_(std::move(blocks)), input_(std::move(input)) {
  b_.validate();
  if (input_.channels() != b_.inputs()) {
    throw DimensionError("SubstitutedQBDAEModel: input channel count mismatch");
  }
  identity_mass_ = is_identity(b_.E11);
}

Vector SubstitutedQBDAEModel::full_state(const Vector& x1) const {
  Vector x(b_.n1 + b_.n2);
  x.head(b_.n1) = x1;
  x.tail(b_.n2) = b_.H2.apply_power(x1);
  return x;
}

void SubstitutedQBDAEModel::rhs(double t, const Vector& x1, Vector& f) const {
  const Vector u = input_(t);
  const Vector x = full_state(x1);
  const auto x2 = x.tail(b_.n2);
  f = b_.A11 * x1;
  f.noalias() += b_.A12 * x2;
  if (b_.inputs() > 0) f.noalias() += b_.B1 * u;
  b_.H1.add_apply_power(x, 1.0, f);
  for (Index k = 0; k < b_.inputs(); ++k) {
    const double uk = u[k];
    if (uk == 0.0) continue;
    const auto kk = static_cast<std::size_t>(k);
    f.noalias() += uk * (b_.N11[kk] * x1);
    f.noalias() += uk * (b_.N12[kk] * x2);
  }
}

// d f / d x1 = J_1 + J_2 D with J = d f / d x at x = [x1; x2(x1)], D = d x2 / d x1.
void SubstitutedQBDAEModel::jacobian_dense(double t, const Vector& x1, Matrix& jac) const {
  const Vector u = input_(t);
  const Vector x = full_state(x1);
  const Index n1 = b_.n1, n2 = b_.n2;
  Matrix jx = Matrix::Zero(n1, n1 + n2);
  jx.leftCols(n1) = Matrix(b_.A11);
  jx.rightCols(n2) = Matrix(b_.A12);
  for (Index k = 0; k < b_.inputs(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (u[k] == 0.0) continue;
    jx.leftCols(n1) += u[k] * Matrix(b_.N11[kk]);
    jx.rightCols(n2) += u[k] * Matrix(b_.N12[kk]);
  }
  b_.H1.add_power_jacobian(x, 1.0, jx);
  Matrix d = Matrix::Zero(n2, n1);
  b_.H2.add_power_jacobian(x1, 1.0, d);
  jac = jx.leftCols(n1);
  jac.noalias() += jx.rightCols(n2) * d;
}

void SubstitutedQBDAEModel::jacobian_sparse(double t, const Vector& x1, SparseMatrix& jac) const {
  const Vector u = input_(t);
  const Vector x = full_state(x1);
  const Index n1 = b_.n1, n2 = b_.n2;
  std::vector<Triplet> trips;
  auto append = [&](const SparseMatrix& m, double scale, Index c0) {
    for (Index k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        trips.emplace_back(it.row(), c0 + it.col(), scale * it.value());
      }
    }
  };
  append(b_.A11, 1.0, 0);
  append(b_.A12, 1.0, n1);
  for (Index k = 0; k < b_.inputs(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    append(b_.N11[kk], u[k], 0);
    append(b_.N12[kk], u[k], n1);
  }
  b_.H1.add_power_jacobian(x, 1.0, trips);
  SparseMatrix jx(n1, n1 + n2);
  jx.setFromTriplets(trips.begin(), trips.end());

  trips.clear();
  b_.H2.add_power_jacobian(x1, 1.0, trips);
  SparseMatrix d(n2, n1);
  d.setFromTriplets(trips.begin(), trips.end());

  const SparseMatrix j1 = jx.leftCols(n1);
  const SparseMatrix j2 = jx.rightCols(n2);
  jac = j1 + SparseMatrix(j2 * d);
}

Trajectory solve_qbdae(const QBSystem& sys, const Vector& x1_0, const InputSignal& input,
                       double t0, std::span<const double> times, const IntegratorOptions& opts,
                       IntegratorStats* stats) {
  if (!sys.blocks) throw DimensionError("solve_qbdae: system has no block partition");
  SubstitutedQBDAEModel model(*sys.blocks, input);
  Trajectory x1 = integrate_ode(model, x1_0, t0, times, opts, stats);
  Trajectory out;
  out.times = std::move(x1.times);
  out.layout = sys.layout;
  out.states.resize(sys.dim(), x1.steps());
  for (Index j = 0; j < x1.steps(); ++j) out.states.col(j) = model.full_state(x1.states.col(j));
  return out;
}

}  // namespace liftrom
