#include "liftrom/dynamics/general_system.hpp"

#include "liftrom/errors.hpp"

#include <cmath>
#include <vector>

namespace liftrom {

Vector ComponentNonlinearity::evaluate(const Vector& x) const {
  const int k = arity();
  std::vector<Index> deps(static_cast<std::size_t>(k));
  std::vector<double> local(static_cast<std::size_t>(k));
  Vector out(size());
  for (Index j = 0; j < size(); ++j) {
    dependencies(j, deps);
    for (int q = 0; q < k; ++q) local[static_cast<std::size_t>(q)] = x[deps[static_cast<std::size_t>(q)]];
    out[j] = value(j, local);
  }
  return out;
}

double CubicNonlinearity::value(Index, std::span<const double> v) const {
  const double x = v[0];
  return (a2_ - x) * x * x;
}

void CubicNonlinearity::gradient(Index, std::span<const double> v, std::span<double> g) const {
  const double x = v[0];
  g[0] = -3.0 * x * x + 2.0 * a2_ * x;
}

nlohmann::json CubicNonlinearity::params() const {
  return {{"n", n_}, {"offset", offset_}, {"a2", a2_}};
}

void ArrheniusNonlinearity::dependencies(Index j, std::span<Index> out) const {
  out[0] = psi_ + j;
  out[1] = theta_ + j;
}

double ArrheniusNonlinearity::value(Index, std::span<const double> local) const {
  const double theta = local[1];
  if (!(theta > 0.0)) throw DomainError("Arrhenius term evaluated at theta <= 0");
  return local[0] * std::exp(gamma_ - gamma_ / theta);
}

void ArrheniusNonlinearity::gradient(Index, std::span<const double> local,
                                     std::span<double> g) const {
  const double theta = local[1];
  if (!(theta > 0.0)) throw DomainError("Arrhenius term evaluated at theta <= 0");
  const double e = std::exp(gamma_ - gamma_ / theta);
  g[0] = e;
  g[1] = local[0] * e * gamma_ / (theta * theta);
}

nlohmann::json ArrheniusNonlinearity::params() const {
  return {{"n", n_}, {"psi_offset", psi_}, {"theta_offset", theta_}, {"gamma", gamma_}};
}

void GeneralNonlinearSystem::validate() const {
  const Index n = dim();
  if (A.cols() != n) throw DimensionError("GeneralNonlinearSystem: A must be square");
  if (E.size() != 0 && (E.rows() != n || E.cols() != n)) {
    throw DimensionError("GeneralNonlinearSystem: E must be n x n");
  }
  if (B.rows() != n) throw DimensionError("GeneralNonlinearSystem: B must have n rows");
  if (!g) throw DimensionError("GeneralNonlinearSystem: missing nonlinearity");
  if (F.rows() != n || F.cols() != g->size()) {
    throw DimensionError("GeneralNonlinearSystem: F must be n x n_g");
  }
  if (!layout.empty() && layout.total() != n) {
    throw DimensionError("GeneralNonlinearSystem: layout mismatch");
  }
}

Vector eval_rhs_general(const GeneralNonlinearSystem& sys, const Vector& x, const Vector& u) {
  if (x.size() != sys.dim()) throw DimensionError("eval_rhs_general: state dimension mismatch");
  if (u.size() != sys.inputs()) throw DimensionError("eval_rhs_general: input dimension mismatch");
  Vector f = sys.A * x;
  if (sys.inputs() > 0) f.noalias() += sys.B * u;
  f.noalias() += sys.F * sys.g->evaluate(x);
  return f;
}

SparseMatrix nonlinearity_jacobian(const ComponentNonlinearity& g, const Vector& x) {
  const int k = g.arity();
  std::vector<Index> deps(static_cast<std::size_t>(k));
  std::vector<double> local(static_cast<std::size_t>(k)), grad(static_cast<std::size_t>(k));
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(g.size() * k));
  for (Index j = 0; j < g.size(); ++j) {
    g.dependencies(j, deps);
    for (int q = 0; q < k; ++q) local[static_cast<std::size_t>(q)] = x[deps[static_cast<std::size_t>(q)]];
    g.gradient(j, local, grad);
    for (int q = 0; q < k; ++q) {
      trips.emplace_back(j, deps[static_cast<std::size_t>(q)], grad[static_cast<std::size_t>(q)]);
    }
  }
  SparseMatrix dg(g.size(), x.size());
  dg.setFromTriplets(trips.begin(), trips.end());
  return dg;
}

GeneralModel::GeneralModel(GeneralNonlinearSystem sys, InputSignal input)
    : sys_(std::move(sys)), input_(std::move(input)) {
  sys_.validate();
  if (input_.channels() != sys_.inputs()) {
    throw DimensionError("GeneralModel: input channel count mismatch");
  }
}

void GeneralModel::rhs(double t, const Vector& x, Vector& f) const {
  f = eval_rhs_general(sys_, x, input_(t));
}

void GeneralModel::jacobian_sparse(double, const Vector& x, SparseMatrix& jac) const {
  jac = sys_.A + SparseMatrix(sys_.F * nonlinearity_jacobian(*sys_.g, x));
}

}  // namespace liftrom
