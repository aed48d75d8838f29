#include "liftrom/models/fhn.hpp"

#include "liftrom/errors.hpp"

#include <cmath>

namespace liftrom {

void FHNConfig::validate() const {
  if (n < 3) throw ConfigError("fhn.n must be at least 3");
  if (!(epsilon > 0.0)) throw ConfigError("fhn.epsilon must be positive");
  if (!(l > 0.0)) throw ConfigError("fhn.l must be positive");
  if (!(t_f > 0.0)) throw ConfigError("fhn.t_f must be positive");
}

double fhn_forcing(double t) { return 5e4 * t * t * t * std::exp(-15.0 * t); }

InputSignal fhn_input() {
  return InputSignal(2, [](double t) { return Vector{{fhn_forcing(t), 1.0}}; });
}

SparseMatrix neumann_laplacian(Index n, double ds) {
  const double s = 1.0 / (ds * ds);
  std::vector<Triplet> trips;
  for (Index i = 0; i < n; ++i) {
    trips.emplace_back(i, i, -2.0 * s);
    if (i == 0) {
      trips.emplace_back(0, 1, 2.0 * s);
    } else if (i == n - 1) {
      trips.emplace_back(i, i - 1, 2.0 * s);
    } else {
      trips.emplace_back(i, i - 1, s);
      trips.emplace_back(i, i + 1, s);
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

namespace {

struct FhnParts {
  SparseMatrix lap;  // eps^2 * Laplacian
  double bc;         // coefficient of u(t) in row v_0: v_s(0) = u via ghost v_{-1} = v_1 - 2 ds u
};

FhnParts fhn_parts(const FHNConfig& cfg) {
  const double e2 = cfg.epsilon * cfg.epsilon;
  return {e2 * neumann_laplacian(cfg.n, cfg.ds()), -2.0 * e2 / cfg.ds()};
}

void append(const SparseMatrix& m, Index r0, Index c0, std::vector<Triplet>& out) {
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
    }
  }
}

SparseMatrix mass(const FHNConfig& cfg, Index blocks) {
  const Index n = cfg.n;
  std::vector<Triplet> trips;
  for (Index b = 0; b < blocks; ++b) {
    const double d = (b == 1 && !cfg.uniform_mass) ? 1.0 : cfg.epsilon;
    for (Index i = 0; i < n; ++i) trips.emplace_back(b * n + i, b * n + i, d);
  }
  SparseMatrix e(blocks * n, blocks * n);
  e.setFromTriplets(trips.begin(), trips.end());
  return e;
}

// Rows shared by the FOM and the lifted form for the linear part of v and w.
void linear_vw(const FHNConfig& cfg, const FhnParts& p, Index dim, std::vector<Triplet>& a,
               Matrix& b) {
  const Index n = cfg.n;
  append(p.lap, 0, 0, a);
  for (Index i = 0; i < n; ++i) {
    a.emplace_back(i, i, -0.1);
    a.emplace_back(i, n + i, -1.0);
    a.emplace_back(n + i, i, cfg.h);
    a.emplace_back(n + i, n + i, -cfg.gamma);
  }
  b = Matrix::Zero(dim, 2);
  b(0, 0) = p.bc;
  b.col(1).head(2 * n).setConstant(cfg.c);
}

}  // namespace

GeneralNonlinearSystem build_fhn_fom(const FHNConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n;
  const FhnParts p = fhn_parts(cfg);
  GeneralNonlinearSystem s;
  s.E = mass(cfg, 2);
  std::vector<Triplet> a;
  linear_vw(cfg, p, 2 * n, a, s.B);
  s.A.resize(2 * n, 2 * n);
  s.A.setFromTriplets(a.begin(), a.end());
  std::vector<Triplet> f;
  for (Index i = 0; i < n; ++i) f.emplace_back(i, i, 1.0);
  s.F.resize(2 * n, n);
  s.F.setFromTriplets(f.begin(), f.end());
  s.g = std::make_shared<CubicNonlinearity>(n, 0, cfg.quadratic_coeff);
  s.layout = Layout::uniform({"v", "w"}, n);
  s.validate();
  return s;
}

QBSystem build_fhn_lifted_qb(const FHNConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n, dim = 3 * n;
  const Index v = 0, w = n, z = 2 * n;
  const double a2 = cfg.quadratic_coeff;
  const FhnParts p = fhn_parts(cfg);

  QBSystem s;
  s.E = mass(cfg, 3);
  std::vector<Triplet> a;
  linear_vw(cfg, p, dim, a, s.B);
  for (Index i = 0; i < n; ++i) {
    a.emplace_back(v + i, z + i, a2);
    a.emplace_back(z + i, z + i, -0.2);
  }
  s.A.resize(dim, dim);
  s.A.setFromTriplets(a.begin(), a.end());

  // eps z' = 2 v (eps v'), expanded term by term.
  TensorBuilder h(dim, {dim, dim});
  for (Index i = 0; i < n; ++i) {
    h.add(v + i, {z + i, v + i}, -1.0);
    h.add(z + i, {z + i, z + i}, -2.0);
    h.add(z + i, {z + i, v + i}, 2.0 * a2);
    h.add(z + i, {w + i, v + i}, -2.0);
  }
  for (Index k = 0; k < p.lap.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(p.lap, k); it; ++it) {
      h.add(z + it.row(), {v + it.row(), v + it.col()}, 2.0 * it.value());
    }
  }
  s.H = std::move(h).build();

  std::vector<Triplet> n1, n2;
  n1.emplace_back(z, v, 2.0 * p.bc);
  for (Index i = 0; i < n; ++i) n2.emplace_back(z + i, v + i, 2.0 * cfg.c);
  SparseMatrix m1(dim, dim), m2(dim, dim);
  m1.setFromTriplets(n1.begin(), n1.end());
  m2.setFromTriplets(n2.begin(), n2.end());
  s.N = {m1, m2};
  s.layout = Layout::uniform({"v", "w", "z"}, n);
  s.validate();
  return s;
}

Vector fhn_lift_ic(const Vector& v0, const Vector& w0) {
  if (v0.size() != w0.size()) throw DimensionError("fhn_lift_ic: v0 and w0 differ in length");
  Vector x(3 * v0.size());
  x << v0, w0, v0.array().square().matrix();
  return x;
}

}  // namespace liftrom
