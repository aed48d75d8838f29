#include "liftrom/reduction/deim.hpp"

#include "liftrom/errors.hpp"
#include "liftrom/tensor/linalg.hpp"

#include <cmath>

namespace liftrom {

namespace {

Index argmax_abs(const Vector& r) {
  Index best = 0;
  double best_val = -1.0;
  for (Index i = 0; i < r.size(); ++i) {
    const double a = std::abs(r[i]);
    if (a > best_val) {
      best_val = a;
      best = i;
    }
  }
  return best;
}

Matrix sample_rows(const Matrix& u, const std::vector<Index>& rows, Index cols) {
  Matrix out(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = u.row(rows[i]).head(cols);
  return out;
}

}  // namespace

std::vector<Index> deim_indices(const Matrix& u) {
  std::vector<Index> p;
  if (u.cols() == 0) return p;
  p.push_back(argmax_abs(u.col(0)));
  for (Index l = 1; l < u.cols(); ++l) {
    const Matrix pu = sample_rows(u, p, l);
    Vector pul(l);
    for (Index i = 0; i < l; ++i) pul[i] = u(p[static_cast<std::size_t>(i)], l);
    const Vector c = pu.partialPivLu().solve(pul);
    const Vector r = u.col(l) - u.leftCols(l) * c;
    p.push_back(argmax_abs(r));
  }
  return p;
}

DEIMOperator deim_build(const Matrix& snapshots, Index r_deim) {
  if (r_deim <= 0) throw DimensionError("deim_build: r_deim must be positive");
  const SVDResult svd = thin_svd(snapshots);
  const Index rank = numerical_rank(svd.sigma, snapshots.rows(), snapshots.cols());
  if (r_deim > rank) {
    throw RankError("deim_build: r_deim = " + std::to_string(r_deim) +
                        " exceeds the numerical rank " + std::to_string(rank) +
                        " of the nonlinear snapshots",
                    rank);
  }
  return deim_from_basis(svd.U.leftCols(r_deim), svd.sigma);
}

DEIMOperator deim_from_basis(Matrix basis, Vector sigma) {
  DEIMOperator d;
  d.basis = std::move(basis);
  d.sigma = std::move(sigma);
  d.indices = deim_indices(d.basis);
  d.pu = sample_rows(d.basis, d.indices, d.size());
  d.pu_lu.compute(d.pu);
  const double rcond = d.size() > 0 ? d.pu_lu.rcond() : 1.0;
  if (!(rcond > 1e-14)) {
    throw RankError("deim_build: P^T U is numerically singular (rcond " + std::to_string(rcond) +
                        ")",
                    d.size());
  }
  return d;
}

Vector DEIMOperator::approximate(const Vector& f) const {
  if (f.size() != basis.rows()) throw DimensionError("DEIMOperator::approximate: size mismatch");
  Vector pf(size());
  for (Index i = 0; i < size(); ++i) pf[i] = f[indices[static_cast<std::size_t>(i)]];
  return basis * pu_lu.solve(pf);
}

PodDeimRom build_pod_deim_rom(const GeneralNonlinearSystem& fom, const ProjectionBasis& v,
                              const DEIMOperator& deim) {
  fom.validate();
  if (v.full_dim() != fom.dim()) {
    throw DimensionError("build_pod_deim_rom: basis has " + std::to_string(v.full_dim()) +
                         " rows, system dimension is " + std::to_string(fom.dim()));
  }
  if (!fom.layout.empty() && !(fom.layout == v.full_layout())) {
    throw DimensionError("build_pod_deim_rom: basis layout does not match the system layout");
  }
  const ComponentNonlinearity& g = *fom.g;
  if (deim.basis.rows() != g.size()) {
    throw DimensionError("build_pod_deim_rom: DEIM basis has " +
                         std::to_string(deim.basis.rows()) + " rows, nonlinearity has " +
                         std::to_string(g.size()) + " components");
  }
  PodDeimRom r;
  if (fom.E.size() != 0) r.E = v.project(fom.E);
  r.A = v.project(fom.A);
  r.A_dense = Matrix(r.A);
  r.B = v.restrict_rows(fom.B);
  const Matrix vtf = v.restrict_rows(Matrix(fom.F));
  const Matrix vtfu = vtf * deim.basis;
  // M = (V^T F U) (P^T U)^{-1}, i.e. M^T = (P^T U)^{-T} (V^T F U)^T.
  r.M = Matrix(deim.pu.transpose()).partialPivLu().solve(vtfu.transpose()).transpose();

  const int arity = g.arity();
  const Matrix vd = v.dense();
  r.sampled_basis.resize(deim.size() * arity, v.reduced_dim());
  std::vector<Index> deps(static_cast<std::size_t>(arity));
  for (Index l = 0; l < deim.size(); ++l) {
    const Index p = deim.indices[static_cast<std::size_t>(l)];
    if (p < 0 || p >= g.size()) {
      throw DimensionError("build_pod_deim_rom: interpolation index " + std::to_string(p) +
                           " outside the nonlinearity's " + std::to_string(g.size()) +
                           " components");
    }
    g.dependencies(p, deps);
    for (int a = 0; a < arity; ++a) {
      const Index row = deps[static_cast<std::size_t>(a)];
      if (row < 0 || row >= fom.dim()) {
        throw DimensionError("build_pod_deim_rom: component " + std::to_string(p) +
                             " reads state index " + std::to_string(row) + " outside the layout");
      }
      r.sampled_basis.row(l * arity + a) = vd.row(row);
    }
  }
  r.indices = deim.indices;
  r.g = fom.g;
  r.layout = v.reduced_layout();
  return r;
}

Vector PodDeimRom::sampled_nonlinearity(const Vector& xr) const {
  const Vector local = sampled_basis * xr;
  const int arity = g->arity();
  Vector gs(static_cast<Index>(indices.size()));
  for (std::size_t l = 0; l < indices.size(); ++l) {
    gs[static_cast<Index>(l)] = g->value(
        indices[l], std::span<const double>(local.data() + l * static_cast<std::size_t>(arity),
                                            static_cast<std::size_t>(arity)));
  }
  return gs;
}

Index PodDeimRom::max_operator_dimension() const {
  return std::max({E.rows(), A.rows(), A.cols(), B.rows(), M.rows(), M.cols(),
                   sampled_basis.rows(), sampled_basis.cols()});
}

PodDeimModel::PodDeimModel(PodDeimRom rom, InputSignal input)
    : rom_(std::move(rom)), input_(std::move(input)) {
  if (input_.channels() != rom_.B.cols()) {
    throw DimensionError("PodDeimModel: input channel count mismatch");
  }
}

void PodDeimModel::rhs(double t, const Vector& x, Vector& f) const {
  f.noalias() = rom_.A_dense * x;
  if (rom_.B.cols() > 0) f.noalias() += rom_.B * input_(t);
  f.noalias() += rom_.M * rom_.sampled_nonlinearity(x);
}

void PodDeimModel::jacobian_dense(double, const Vector& x, Matrix& jac) const {
  const Vector local = rom_.sampled_basis * x;
  const int arity = rom_.g->arity();
  const auto m = static_cast<Index>(rom_.indices.size());
  Matrix dg = Matrix::Zero(m, x.size());
  std::vector<double> grad(static_cast<std::size_t>(arity));
  for (Index l = 0; l < m; ++l) {
    rom_.g->gradient(rom_.indices[static_cast<std::size_t>(l)],
                     std::span<const double>(local.data() + l * arity,
                                             static_cast<std::size_t>(arity)),
                     grad);
    for (int a = 0; a < arity; ++a) {
      dg.row(l) += grad[static_cast<std::size_t>(a)] * rom_.sampled_basis.row(l * arity + a);
    }
  }
  jac = rom_.A_dense;
  jac.noalias() += rom_.M * dg;
}

PodGalerkinModel::PodGalerkinModel(const GeneralNonlinearSystem& fom, const ProjectionBasis& v,
                                   InputSignal input)
    : v_(v), vdense_(v.dense()), g_(fom.g), input_(std::move(input)) {
  fom.validate();
  if (v.full_dim() != fom.dim()) throw DimensionError("PodGalerkinModel: basis dimension mismatch");
  if (fom.E.size() != 0) e_ = v.project(fom.E);
  a_ = v.project(fom.A);
  a_dense_ = Matrix(a_);
  b_ = v.restrict_rows(fom.B);
  vtf_ = v.restrict_rows(Matrix(fom.F));
  if (input_.channels() != b_.cols()) {
    throw DimensionError("PodGalerkinModel: input channel count mismatch");
  }
}

void PodGalerkinModel::rhs(double t, const Vector& x, Vector& f) const {
  f.noalias() = a_dense_ * x;
  if (b_.cols() > 0) f.noalias() += b_ * input_(t);
  f.noalias() += vtf_ * g_->evaluate(vdense_ * x);
}

void PodGalerkinModel::jacobian_dense(double, const Vector& x, Matrix& jac) const {
  const SparseMatrix dg = nonlinearity_jacobian(*g_, vdense_ * x);
  jac = a_dense_;
  jac.noalias() += vtf_ * (dg * vdense_);
}

}  // namespace liftrom
