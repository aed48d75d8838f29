#include "liftrom/models/tubular.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace liftrom {

void TubularConfig::validate() const {
  if (n < 3) throw ConfigError("tubular.n must be at least 3");
  if (!(pe > 0.0)) throw ConfigError("tubular.pe must be positive");
  if (!(t_f > 0.0)) throw ConfigError("tubular.t_f must be positive");
  if (psi0.size() != 0 && psi0.size() != n) throw ConfigError("tubular psi0 profile has wrong length");
  if (theta0.size() != 0 && theta0.size() != n) {
    throw ConfigError("tubular theta0 profile has wrong length");
  }
}

Vector tubular_grid(const TubularConfig& cfg) {
  return Vector::LinSpaced(cfg.n, 1.0, static_cast<double>(cfg.n)) * cfg.ds();
}

namespace {

// Convection-diffusion x' = x_ss / Pe - x_s - sink * x with
// x_s(0) = Pe (x(0) - feed) and x_s(1) = 0.
void transport(const TubularConfig& cfg, double feed, double sink, SparseMatrix& a, Vector& b) {
  const Index n = cfg.n;
  const double ds = cfg.ds();
  const double d = 1.0 / (cfg.pe * ds * ds);
  // Boundary node x_0 = a0 x_1 + c0 from the one-sided Robin relation.
  const double a0 = 1.0 / (1.0 + cfg.pe * ds);
  const double c0 = cfg.pe * ds * feed * a0;
  std::vector<Triplet> t;
  b = Vector::Zero(n);
  auto left = [&](Index k, double w) {
    if (k > 0) {
      t.emplace_back(k, k - 1, w);
    } else {
      t.emplace_back(0, 0, w * a0);
      b[0] += w * c0;
    }
  };
  for (Index k = 0; k < n; ++k) {
    t.emplace_back(k, k, -2.0 * d - sink);
    left(k, d);
    t.emplace_back(k, k < n - 1 ? k + 1 : k - 1, d);
    if (cfg.convection == Convection::Upwind) {
      t.emplace_back(k, k, -1.0 / ds);
      left(k, 1.0 / ds);
    } else if (k < n - 1) {
      t.emplace_back(k, k + 1, -0.5 / ds);
      left(k, 0.5 / ds);
    }
  }
  a.resize(n, n);
  a.setFromTriplets(t.begin(), t.end());
}

void append(const SparseMatrix& m, Index r0, Index c0, double scale, std::vector<Triplet>& out) {
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
    }
  }
}

}  // namespace

TubularOperators tubular_operators(const TubularConfig& cfg) {
  cfg.validate();
  TubularOperators ops;
  transport(cfg, cfg.mu, 0.0, ops.a_psi, ops.b_psi);
  transport(cfg, 1.0, cfg.beta, ops.a_theta, ops.b_theta);
  ops.b_theta.array() += cfg.beta * cfg.theta_ref;
  return ops;
}

InputSignal tubular_input() { return InputSignal::constant(Vector::Ones(1)); }

GeneralNonlinearSystem build_tubular_fom(const TubularConfig& cfg) {
  const auto ops = tubular_operators(cfg);
  const Index n = cfg.n;
  GeneralNonlinearSystem s;
  s.A = block_diag({ops.a_psi, ops.a_theta});
  s.B.resize(2 * n, 1);
  s.B << ops.b_psi, ops.b_theta;
  std::vector<Triplet> f;
  for (Index i = 0; i < n; ++i) {
    f.emplace_back(i, i, -cfg.damkohler);
    f.emplace_back(n + i, i, cfg.b_const * cfg.damkohler);
  }
  s.F.resize(2 * n, n);
  s.F.setFromTriplets(f.begin(), f.end());
  s.g = std::make_shared<ArrheniusNonlinearity>(n, 0, n, cfg.gamma);
  s.layout = Layout::uniform({"psi", "theta"}, n);
  s.validate();
  return s;
}

QuarticSystem build_tubular_quartic(const TubularConfig& cfg) {
  const auto ops = tubular_operators(cfg);
  const Index n = cfg.n, dim = 5 * n;
  const Index psi = 0, th = n, w1 = 2 * n, w2 = 3 * n, w3 = 4 * n;
  const double d = cfg.damkohler, bd = cfg.b_const * cfg.damkohler, g = cfg.gamma;

  QuarticSystem s;
  s.A = block_diag({ops.a_psi, ops.a_theta, SparseMatrix(3 * n, 3 * n)});
  s.B = Matrix::Zero(dim, 1);
  s.B.col(0).head(2 * n) << ops.b_psi, ops.b_theta;

  TensorBuilder g2(dim, {dim, dim}), g3(dim, {dim, dim, dim}), g4(dim, {dim, dim, dim, dim});
  TensorBuilder n2(dim, {dim, dim});
  std::vector<Triplet> n1;
  for (Index i = 0; i < n; ++i) {
    g2.add(psi + i, {psi + i, w1 + i}, -d);
    g2.add(th + i, {psi + i, w1 + i}, bd);
    // w1' = g w1 w2 theta',  w2' = -2 w2 w3 theta',  w3' = -w2 theta'
    g4.add(w1 + i, {w1 + i, w2 + i, psi + i, w1 + i}, g * bd);
    g4.add(w2 + i, {w2 + i, w3 + i, psi + i, w1 + i}, -2.0 * bd);
    g3.add(w3 + i, {w2 + i, psi + i, w1 + i}, -bd);
    n2.add(w1 + i, {w1 + i, w2 + i}, g * ops.b_theta[i]);
    n2.add(w2 + i, {w2 + i, w3 + i}, -2.0 * ops.b_theta[i]);
    n1.emplace_back(w3 + i, w2 + i, -ops.b_theta[i]);
  }
  for (Index k = 0; k < ops.a_theta.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(ops.a_theta, k); it; ++it) {
      const Index i = it.row(), j = it.col();
      g3.add(w1 + i, {w1 + i, w2 + i, th + j}, g * it.value());
      g3.add(w2 + i, {w2 + i, w3 + i, th + j}, -2.0 * it.value());
      g2.add(w3 + i, {w2 + i, th + j}, -it.value());
    }
  }
  s.G2 = std::move(g2).build();
  s.G3 = std::move(g3).build();
  s.G4 = std::move(g4).build();
  SparseMatrix m1(dim, dim);
  m1.setFromTriplets(n1.begin(), n1.end());
  s.N1 = {m1};
  s.N2 = {std::move(n2).build()};
  s.layout = Layout::uniform({"psi", "theta", "w1", "w2", "w3"}, n);
  s.validate();
  return s;
}

QBSystem build_tubular_qbdae(const TubularConfig& cfg) {
  const auto ops = tubular_operators(cfg);
  const Index n = cfg.n, n1 = 5 * n, n2 = 3 * n, dim = n1 + n2;
  const Index psi = 0, th = n, w1 = 2 * n, w2 = 3 * n, w3 = 4 * n;
  const Index w4 = n1, w5 = n1 + n, w6 = n1 + 2 * n;
  const double d = cfg.damkohler, bd = cfg.b_const * cfg.damkohler, g = cfg.gamma;

  QBBlocks b;
  b.n1 = n1;
  b.n2 = n2;
  b.E11 = sparse_identity(n1);
  b.A11 = block_diag({ops.a_psi, ops.a_theta, SparseMatrix(3 * n, 3 * n)});
  std::vector<Triplet> a12;
  append(sparse_identity(n), psi, 0, -d, a12);
  append(sparse_identity(n), th, 0, bd, a12);
  b.A12.resize(n1, n2);
  b.A12.setFromTriplets(a12.begin(), a12.end());
  b.B1 = Matrix::Zero(n1, 1);
  b.B1.col(0).head(2 * n) << ops.b_psi, ops.b_theta;

  TensorBuilder h1(n1, {dim, dim});
  TensorBuilder h2(n2, {n1, n1});
  std::vector<Triplet> n11, n12;
  for (Index i = 0; i < n; ++i) {
    // w1' = g w6 theta',  w2' = -2 w5 theta',  w3' = -w2 theta'
    h1.add(w1 + i, {w4 + i, w6 + i}, g * bd);
    h1.add(w2 + i, {w4 + i, w5 + i}, -2.0 * bd);
    h1.add(w3 + i, {w2 + i, w4 + i}, -bd);
    n12.emplace_back(w1 + i, w6 - n1 + i, g * ops.b_theta[i]);
    n12.emplace_back(w2 + i, w5 - n1 + i, -2.0 * ops.b_theta[i]);
    n11.emplace_back(w3 + i, w2 + i, -ops.b_theta[i]);
    h2.add(i, {psi + i, w1 + i}, 1.0);
    h2.add(n + i, {w2 + i, w3 + i}, 1.0);
    h2.add(2 * n + i, {w1 + i, w2 + i}, 1.0);
  }
  for (Index k = 0; k < ops.a_theta.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(ops.a_theta, k); it; ++it) {
      const Index i = it.row(), j = it.col();
      h1.add(w1 + i, {w6 + i, th + j}, g * it.value());
      h1.add(w2 + i, {w5 + i, th + j}, -2.0 * it.value());
      h1.add(w3 + i, {w2 + i, th + j}, -it.value());
    }
  }
  b.H1 = std::move(h1).build();
  b.H2 = std::move(h2).build();
  SparseMatrix m11(n1, n1), m12(n1, n2);
  m11.setFromTriplets(n11.begin(), n11.end());
  m12.setFromTriplets(n12.begin(), n12.end());
  b.N11 = {m11};
  b.N12 = {m12};
  return QBSystem::from_blocks(std::move(b),
                               Layout::uniform({"psi", "theta", "w1", "w2", "w3", "w4", "w5", "w6"}, n));
}

Vector tubular_initial_state(const TubularConfig& cfg) {
  cfg.validate();
  Vector x(2 * cfg.n);
  x.head(cfg.n) = cfg.psi0.size() ? cfg.psi0 : Vector::Ones(cfg.n);
  x.tail(cfg.n) = cfg.theta0.size() ? cfg.theta0 : Vector::Ones(cfg.n);
  return x;
}

Vector tubular_quartic_ic(const Vector& psi0, const Vector& theta0, double gamma) {
  const Index n = psi0.size();
  if (theta0.size() != n) throw DimensionError("tubular_quartic_ic: profile lengths differ");
  if (n > 0 && !(theta0.minCoeff() > 0.0)) {
    throw DomainError("consistent lift requires theta0 > 0 everywhere");
  }
  Vector x(5 * n);
  const auto th = theta0.array();
  x << psi0, theta0, (gamma - gamma / th).exp().matrix(), th.square().inverse().matrix(),
      th.inverse().matrix();
  return x;
}

Vector tubular_qbdae_ic(const Vector& psi0, const Vector& theta0, double gamma) {
  const Index n = psi0.size();
  const Vector q = tubular_quartic_ic(psi0, theta0, gamma);
  const auto w1 = q.segment(2 * n, n).array(), w2 = q.segment(3 * n, n).array(),
             w3 = q.segment(4 * n, n).array();
  Vector x(8 * n);
  x << q, (psi0.array() * w1).matrix(), (w2 * w3).matrix(), (w1 * w2).matrix();
  return x;
}

Vector read_profile_csv(const std::filesystem::path& path, const Vector& grid) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read profile " + path.string());
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double s, v;
    if (!(ls >> s >> v)) {
      if (pts.empty()) continue;  // header
      throw ConfigError("malformed profile row in " + path.string() + ": " + line);
    }
    pts.emplace_back(s, v);
  }
  if (pts.size() < 2) throw ConfigError("profile " + path.string() + " needs at least two rows");
  std::sort(pts.begin(), pts.end());
  Vector out(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    auto hi = std::lower_bound(pts.begin(), pts.end(), s,
                               [](const auto& p, double v) { return p.first < v; });
    if (hi == pts.begin()) {
      out[i] = pts.front().second;
    } else if (hi == pts.end()) {
      out[i] = pts.back().second;
    } else {
      const auto lo = hi - 1;
      const double w = (s - lo->first) / (hi->first - lo->first);
      out[i] = (1.0 - w) * lo->second + w * hi->second;
    }
  }
  return out;
}

}  // namespace liftrom
