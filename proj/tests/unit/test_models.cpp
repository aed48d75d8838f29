#include "doctest.h"
#include "test_support.hpp"

#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/lifting.hpp"
#include "liftrom/models/tubular.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace liftrom;
using namespace liftrom::testing;

namespace {

Vector solve_mass(const SparseMatrix& e, const Vector& f) { return Matrix(e).lu().solve(f); }

FHNConfig small_fhn(Index n = 8) {
  FHNConfig cfg;
  cfg.n = n;
  return cfg;
}

TubularConfig small_tubular(Index n = 7) {
  TubularConfig cfg;
  cfg.n = n;
  return cfg;
}

}  // namespace

TEST_CASE("FHN FOM hand evaluations") {
  auto cfg = small_fhn();
  const Index n = cfg.n;
  SUBCASE("zero state, zero forcing") {
    const auto s = build_fhn_fom(cfg);
    const Vector xdot = solve_mass(s.E, eval_rhs_general(s, Vector::Zero(2 * n), Vector{{0.0, 1.0}}));
    for (Index i = 0; i < n; ++i) {
      CHECK(xdot[i] == doctest::Approx(cfg.c / cfg.epsilon).epsilon(1e-14));
      CHECK(xdot[n + i] == doctest::Approx(cfg.c).epsilon(1e-14));
    }
  }
  SUBCASE("uniform v = 1 with quadratic coefficient 0.1") {
    cfg.quadratic_coeff = 0.1;
    const auto s = build_fhn_fom(cfg);
    Vector x = Vector::Zero(2 * n);
    x.head(n).setOnes();
    const Vector f = eval_rhs_general(s, x, Vector{{0.0, 1.0}});
    for (Index i = 0; i < n; ++i) CHECK(f[i] == doctest::Approx(-1.0 + 0.1 - 0.1 + cfg.c).epsilon(1e-12));
  }
  SUBCASE("diffusion stencil is second order on cos(pi s)") {
    double prev = 0.0;
    for (Index m : {33, 65, 129}) {
      const double ds = 1.0 / static_cast<double>(m - 1);
      const Vector s = Vector::LinSpaced(m, 0.0, 1.0);
      const Vector v = (std::numbers::pi * s).array().cos();
      const Vector lap = neumann_laplacian(m, ds) * v;
      const double err = (lap + std::numbers::pi * std::numbers::pi * v).cwiseAbs().maxCoeff();
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
      prev = err;
    }
  }
  SUBCASE("mass matrix variants") {
    CHECK(Matrix(build_fhn_fom(cfg).E).diagonal().tail(n).isOnes());
    cfg.uniform_mass = true;
    CHECK((Matrix(build_fhn_fom(cfg).E).diagonal().array() == cfg.epsilon).all());
  }
}

TEST_CASE("FHN lifted QB system") {
  SUBCASE("z rows reproduce the hand-expanded quadratic terms") {
    auto cfg = small_fhn(3);
    cfg.quadratic_coeff = 0.1;
    const auto s = build_fhn_lifted_qb(cfg);
    const double v = 0.7, z = v * v;
    const Vector w{{0.3, -0.2, 0.5}};
    Vector x(9);
    x << Vector::Constant(3, v), w, Vector::Constant(3, z);
    const Vector hx = s.H.apply_power(x);
    for (Index i = 0; i < 3; ++i) {
      CHECK(hx[6 + i] == doctest::Approx(-2 * z * z + 0.2 * z * v - 2 * w[i] * v).epsilon(1e-14));
      CHECK(hx[i] == doctest::Approx(-z * v).epsilon(1e-14));
    }
  }
  SUBCASE("second input column carries c in v and w rows") {
    const auto cfg = small_fhn();
    const auto s = build_fhn_lifted_qb(cfg);
    const Index n = cfg.n;
    CHECK(s.B.col(1).head(2 * n).isConstant(cfg.c));
    CHECK(s.B.col(1).tail(n).isZero(0.0));
    CHECK(s.B.col(0).head(1)[0] == doctest::Approx(-2.0 * cfg.epsilon * cfg.epsilon / cfg.ds()));
  }
  SUBCASE("lifted right-hand side is the chain rule of the FOM at z = v^2") {
    for (bool uniform : {false, true}) {
      auto cfg = small_fhn(9);
      cfg.uniform_mass = uniform;
      const Index n = cfg.n;
      const auto fom = build_fhn_fom(cfg);
      const auto qb = build_fhn_lifted_qb(cfg);
      for (int trial = 0; trial < 5; ++trial) {
        const Vector v = random_vector(n), w = random_vector(n), u = random_vector(2);
        Vector xf(2 * n);
        xf << v, w;
        const Vector df = solve_mass(fom.E, eval_rhs_general(fom, xf, u));
        const Vector dl = solve_mass(qb.E, eval_rhs_qb(qb, fhn_lift_ic(v, w), u));
        CHECK(rel_diff(dl.head(2 * n), df) <= 1e-12);
        const Vector dz = 2.0 * v.array() * df.head(n).array();
        CHECK(rel_diff(dl.tail(n), dz) <= 1e-12);
      }
    }
  }
  SUBCASE("consistent zero initial state") {
    CHECK(fhn_lift_ic(Vector::Zero(4), Vector::Zero(4)).isZero(0.0));
  }
}

TEST_CASE("tubular FOM") {
  const auto cfg = small_tubular();
  const Index n = cfg.n;
  const auto s = build_tubular_fom(cfg);
  SUBCASE("theta = 1 gives unit Arrhenius factor") {
    const Vector psi = random_vector(n).cwiseAbs();
    Vector x(2 * n);
    x << psi, Vector::Ones(n);
    const Vector nl = s.F * s.g->evaluate(x);
    CHECK(rel_diff(nl.head(n), -cfg.damkohler * psi) <= 1e-15);
    CHECK(rel_diff(nl.tail(n), cfg.b_const * cfg.damkohler * psi) <= 1e-15);
  }
  SUBCASE("non-positive temperature is a domain error") {
    Vector x = Vector::Ones(2 * n);
    x[n + 2] = 0.0;
    CHECK_THROWS_AS(eval_rhs_general(s, x, Vector::Ones(1)), DomainError);
  }
  SUBCASE("uniform feed state is an equilibrium of the transport part") {
    const auto ops = tubular_operators(cfg);
    CHECK((ops.a_psi * Vector::Ones(n) + ops.b_psi).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((ops.a_theta * Vector::Ones(n) + ops.b_theta).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("D = 0 trajectory matches the matrix-exponential solution") {
    auto lin = small_tubular(20);
    lin.damkohler = 0.0;
    lin.theta0 = Vector::LinSpaced(20, 1.0, 1.2);
    GeneralModel m(build_tubular_fom(lin), tubular_input());
    const Vector x0 = tubular_initial_state(lin);
    IntegratorOptions o;
    o.dt = 1e-4;
    const double t[] = {0.2};
    const Vector got = integrate_ode(m, x0, 0.0, t, o).states.col(0);
    const Matrix a = Matrix(m.system().A);
    const Vector b = m.system().B.col(0);
    const Matrix ea = (a * 0.2).exp();
    const Vector expect = ea * x0 + a.lu().solve((ea - Matrix::Identity(40, 40)) * b);
    CHECK((got - expect).norm() <= 1e-10 * expect.norm());
  }
}

TEST_CASE("tubular quartic lift") {
  const auto cfg = small_tubular();
  const Index n = cfg.n;
  const auto fom = build_tubular_fom(cfg);
  const auto q = build_tubular_quartic(cfg);
  SUBCASE("unit lift values and matching psi/theta rows") {
    const Vector x = tubular_quartic_ic(Vector::Ones(n), Vector::Ones(n), cfg.gamma);
    CHECK(x.isOnes(0.0));
    const Vector fq = eval_rhs_quartic(q, x, Vector::Ones(1));
    const Vector ff = eval_rhs_general(fom, Vector::Ones(2 * n), Vector::Ones(1));
    CHECK(rel_diff(fq.head(2 * n), ff) <= 1e-13);
  }
  SUBCASE("auxiliary rows follow the chain rule at random states") {
    for (int trial = 0; trial < 5; ++trial) {
      const Vector psi = Vector::Ones(n) + 0.2 * random_vector(n);
      const Vector th = Vector::Ones(n) + 0.2 * random_vector(n);
      Vector xf(2 * n);
      xf << psi, th;
      const Vector ff = eval_rhs_general(fom, xf, Vector::Ones(1));
      const Vector fq = eval_rhs_quartic(q, tubular_quartic_ic(psi, th, cfg.gamma), Vector::Ones(1));
      CHECK(rel_diff(fq.head(2 * n), ff) <= 1e-12);
      const auto thd = ff.tail(n).array();
      const Vector w1 = (cfg.gamma - cfg.gamma / th.array()).exp();
      CHECK(rel_diff(fq.segment(2 * n, n), (w1.array() * cfg.gamma / th.array().square() * thd).matrix()) <= 1e-12);
      CHECK(rel_diff(fq.segment(3 * n, n), (-2.0 / th.array().cube() * thd).matrix()) <= 1e-12);
      CHECK(rel_diff(fq.segment(4 * n, n), (-1.0 / th.array().square() * thd).matrix()) <= 1e-12);
    }
  }
  SUBCASE("quartic interactions live only in w1 and w2 rows") {
    for (std::size_t e = 0; e < q.G4.nnz(); ++e) {
      const Index r = q.G4.row_of(e);
      CHECK(r >= 2 * n);
      CHECK(r < 4 * n);
    }
    CHECK(q.G4.nnz() == static_cast<std::size_t>(2 * n));
  }
}

TEST_CASE("tubular QB-DAE lift") {
  const auto cfg = small_tubular();
  const Index n = cfg.n;
  const auto s = build_tubular_qbdae(cfg);
  const auto& b = *s.blocks;
  SUBCASE("unit lift has zero algebraic residual") {
    const Vector x = tubular_qbdae_ic(Vector::Ones(n), Vector::Ones(n), cfg.gamma);
    CHECK(x.isOnes(0.0));
    CHECK(algebraic_residual(b, x).isZero(0.0));
  }
  SUBCASE("A12 couples w4 into psi and theta rows") {
    const Matrix a12 = Matrix(b.A12);
    CHECK(a12.block(0, 0, n, n) == -cfg.damkohler * Matrix::Identity(n, n));
    CHECK(a12.block(n, 0, n, n) == cfg.b_const * cfg.damkohler * Matrix::Identity(n, n));
    CHECK(a12.rightCols(2 * n).isZero(0.0));
    CHECK(a12.bottomRows(3 * n).isZero(0.0));
  }
  SUBCASE("assembled structure: zero mass rows and identity on the constrained block") {
    const Matrix e = Matrix(s.E), a = Matrix(s.A);
    CHECK(e.bottomRows(3 * n).isZero(0.0));
    CHECK(a.bottomRightCorner(3 * n, 3 * n).isIdentity(0.0));
    CHECK(a.bottomLeftCorner(3 * n, 5 * n).isZero(0.0));
  }
  SUBCASE("substituted dynamics equal the quartic right-hand side") {
    const auto q = build_tubular_quartic(cfg);
    SubstitutedQBDAEModel m(b, tubular_input());
    for (int trial = 0; trial < 5; ++trial) {
      const Vector psi = Vector::Ones(n) + 0.2 * random_vector(n);
      const Vector th = Vector::Ones(n) + 0.2 * random_vector(n);
      const Vector x1 = tubular_quartic_ic(psi, th, cfg.gamma);
      Vector f;
      m.rhs(0.0, x1, f);
      CHECK(rel_diff(f, eval_rhs_quartic(q, x1, Vector::Ones(1))) <= 1e-12);
      const Vector full = tubular_qbdae_ic(psi, th, cfg.gamma);
      CHECK(rel_diff(m.full_state(x1), full) <= 1e-15);
      CHECK(algebraic_residual(b, full).cwiseAbs().maxCoeff() <= 1e-12 * full.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("consistent_lift_ic examples") {
  CHECK(consistent_lift_ic(LiftKind::FhnQB, Vector::Zero(6)).isZero(0.0));
  CHECK(consistent_lift_ic(LiftKind::TubularQuartic, Vector::Ones(6)).isOnes(0.0));
  Vector orig(2);
  orig << 1.0, 2.0;
  const Vector x = consistent_lift_ic(LiftKind::TubularQBDAE, orig, 25.0);
  CHECK(x[2] == doctest::Approx(std::exp(12.5)).epsilon(1e-15));
  CHECK(x[3] == 0.25);
  CHECK(x[4] == 0.5);
  CHECK(x[6] == 0.125);
  orig[1] = -0.5;
  CHECK_THROWS_AS(consistent_lift_ic(LiftKind::TubularQuartic, orig), DomainError);
  orig[1] = 0.0;
  CHECK_THROWS_AS(consistent_lift_ic(LiftKind::TubularQBDAE, orig), DomainError);
  CHECK(consistent_lift_ic(LiftKind::ScalarQBODE, Vector::Constant(1, 2.0)) == Vector{{2.0, 4.0, 16.0, 8.0}});
}

TEST_CASE("profile CSV interpolation") {
  const auto path = std::filesystem::temp_directory_path() / "liftrom_profile_test.csv";
  {
    std::ofstream os(path);
    os << "s,value\n0,1\n0.5,2\n1,1.5\n";
  }
  const Vector got = read_profile_csv(path, Vector{{0.25, 0.5, 0.75, 1.0}});
  CHECK(got == Vector{{1.5, 2.0, 1.75, 1.5}});
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_profile_csv(path, Vector::Ones(2)), ConfigError);
}
