#include "doctest.h"
#include "test_support.hpp"

#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/tubular.hpp"
#include "liftrom/reduction/deim.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/projection.hpp"
#include "liftrom/reduction/reduced_systems.hpp"
#include "liftrom/reduction/snapshots.hpp"
#include "liftrom/tensor/linalg.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace liftrom;
using namespace liftrom::testing;

namespace {

PODBasis random_pod(const Layout& full, const std::vector<Index>& ranks) {
  PODBasis p;
  const auto& bs = full.blocks();
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (ranks[i] < 0) continue;
    PODBlock b;
    b.name = bs[i].name;
    b.basis = random_orthonormal(bs[i].size, ranks[i]);
    b.modes = leading_modes(ranks[i]);
    p.blocks.push_back(std::move(b));
  }
  return p;
}

Trajectory toy_trajectory(Index n_t) {
  Trajectory tr;
  tr.layout = Layout::sized({"a", "b"}, {4, 3});
  tr.states = random_matrix(7, n_t);
  for (Index i = 1; i <= n_t; ++i) tr.times.push_back(0.1 * static_cast<double>(i));
  return tr;
}

TubularConfig small_tubular() {
  TubularConfig cfg;
  cfg.n = 10;
  return cfg;
}

/// Every block's span contains the constant vector.
ProjectionBasis constant_including_basis(const Layout& full, Index r) {
  PODBasis p;
  for (const auto& vb : full.blocks()) {
    Matrix cols = random_matrix(vb.size, r);
    cols.col(0).setOnes();
    Eigen::HouseholderQR<Matrix> qr(cols);
    p.blocks.push_back({vb.name, qr.householderQ() * Matrix::Identity(vb.size, r), {}, leading_modes(r), r});
  }
  return ProjectionBasis(full, p);
}

ProjectionBasis per_variable_basis(const Layout& full, Index r) {
  std::vector<Index> ranks(full.blocks().size(), r);
  return ProjectionBasis(full, random_pod(full, ranks));
}

Vector positive_theta_state(const Layout& layout, const Vector& base) {
  Vector x = base;
  const auto& th = layout.block("theta");
  x.segment(th.offset, th.size).array() = 1.0 + 0.1 * x.segment(th.offset, th.size).array();
  return x;
}

}  // namespace

TEST_CASE("collect_snapshots slices by layout and window") {
  const Trajectory tr = toy_trajectory(12);
  const SnapshotSet s = collect_snapshots(tr, 5);
  CHECK(s.count() == 5);
  CHECK(s.block("a") == tr.states.block(0, 0, 4, 5));
  CHECK(s.block("b") == tr.states.block(4, 0, 3, 5));
  CHECK(s.stacked() == tr.states.leftCols(5));
  CHECK(collect_snapshots(tr, 12).count() == 12);
  const SnapshotSet only_b = collect_snapshots(tr, {"b"}, 3);
  CHECK(only_b.layout.total() == 3);
  CHECK_THROWS_AS(collect_snapshots(tr, 0), DimensionError);
  CHECK_THROWS_AS(collect_snapshots(tr, 13), DimensionError);
  CHECK(window_count(tr.times, 0.5) == 5);
  CHECK(window_count(uniform_grid(0.0, 12.0, 150), 8.0) == 100);
  CHECK(window_count(uniform_grid(0.0, 30.0, 3000), 20.0) == 2000);
}

TEST_CASE("POD basis examples") {
  SUBCASE("repeated single vector, r = 1") {
    const Vector v = random_vector(6);
    SnapshotSet s;
    s.layout = Layout::uniform({"x"}, 6);
    s.blocks = {v * Vector::Ones(5).transpose()};
    s.times = {1, 2, 3, 4, 5};
    const PODBasis p = compute_pod_basis(s, {{"x", 1}});
    const Vector b = p.block("x").basis.col(0);
    CHECK(std::min((b - v.normalized()).norm(), (b + v.normalized()).norm()) < 1e-14);
    CHECK_THROWS_AS(compute_pod_basis(s, {{"x", 2}}), RankError);
  }
  SUBCASE("random rank-5 block reconstructs") {
    SnapshotSet s;
    s.layout = Layout::sized({"x", "y"}, {40, 30});
    s.blocks = {random_matrix(40, 5) * random_matrix(5, 20), random_matrix(30, 20)};
    s.times.assign(20, 0.0);
    const PODBasis p = compute_pod_basis(s, {{"x", 5}, {"y", 7}});
    const Matrix& v = p.block("x").basis;
    const Matrix& x = s.blocks[0];
    CHECK((x - v * (v.transpose() * x)).norm() <= 1e-10 * x.norm());
    CHECK(orthonormality_defect(v) <= 1e-12);
    CHECK(orthonormality_defect(p.block("y").basis) <= 1e-12);
    CHECK(p.total_rank() == 12);
    CHECK(p.reduced_layout().block("y").offset == 5);
    try {
      compute_pod_basis(s, {{"x", 6}, {"y", 1}});
      FAIL("expected RankError");
    } catch (const RankError& e) {
      CHECK(e.numerical_rank() == 5);
      CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }
    CHECK_THROWS_AS(compute_pod_basis(s, {{"x", 2}}), DimensionError);
    CHECK_THROWS_AS(compute_pod_basis(s, {{"x", 2}, {"y", 2}, {"z", 1}}), DimensionError);
  }
  SUBCASE("explicit mode selection") {
    SnapshotSet s;
    s.layout = Layout::uniform({"x"}, 10);
    s.blocks = {random_matrix(10, 8)};
    s.times.assign(8, 0.0);
    const SVDResult svd = thin_svd(s.blocks[0]);
    const PODBasis p = compute_pod_basis(s, std::map<std::string, std::vector<Index>>{{"x", {0, 2, 5}}});
    CHECK(p.block("x").basis.col(1) == svd.U.col(2));
    CHECK(p.block("x").basis.col(2) == svd.U.col(5));
    CHECK_THROWS_AS(compute_pod_basis(s, std::map<std::string, std::vector<Index>>{{"x", {1, 1}}}),
                    DimensionError);
  }
}

TEST_CASE("projection basis lift, restrict and operator projection") {
  const Layout full = Layout::sized({"a", "b", "c"}, {5, 4, 6});
  const PODBasis pod = random_pod(full, {2, -1, 3});
  const ProjectionBasis v(full, pod, {"b"});
  CHECK(v.reduced_dim() == 9);
  CHECK(v.reduced_layout().block("b").offset == 2);
  const Matrix vd = v.dense();
  CHECK(orthonormality_defect(vd) <= 1e-12);
  const Vector xr = random_vector(9);
  CHECK((v.lift(xr) - vd * xr).norm() <= 1e-14);
  const Vector x = random_vector(15);
  CHECK((v.restrict(x) - vd.transpose() * x).norm() <= 1e-14);
  const Matrix a = random_matrix(15, 15);
  const SparseMatrix as = a.sparseView();
  CHECK((Matrix(v.project(as)) - vd.transpose() * a * vd).norm() <= 1e-12 * a.norm());
  CHECK_THROWS_AS(ProjectionBasis(full, pod), DimensionError);
  CHECK_THROWS_AS(ProjectionBasis(full, pod, {"a", "b"}), DimensionError);

  const ProjectionBasis id = ProjectionBasis::identity(full);
  CHECK(id.dense() == Matrix::Identity(15, 15));
  const ProjectionBasis other = ProjectionBasis::identity(Layout::sized({"d", "e", "f"}, {5, 4, 6}));
  const ProjectionBasis both = ProjectionBasis::concat(v, other);
  CHECK(both.full_dim() == 30);
  CHECK(both.reduced_dim() == 24);
  CHECK(both.block_of(16) == 3);
}

TEST_CASE("tensor projection identity for orders 2 to 4") {
  const Layout full = Layout::sized({"a", "b", "c"}, {3, 2, 3});
  const ProjectionBasis v(full, random_pod(full, {2, -1, 2}), {"b"});
  const Matrix vd = v.dense();
  for (int order = 2; order <= 4; ++order) {
    const auto rt = random_tensor(8, std::vector<Index>(static_cast<std::size_t>(order), 8), 0.3);
    const MatricizedTensor red = project_tensor(rt.tensor, v, v);
    CHECK(red.out_dim() == 6);
    CHECK(red.in_dims() == std::vector<Index>(static_cast<std::size_t>(order), 6));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Vector xr = random_vector(6);
      const Vector expect = vd.transpose() * rt.tensor.apply_power(vd * xr);
      worst = std::max(worst, rel_diff(red.apply_power(xr), expect));
    }
    CHECK(worst <= 1e-12);
    CHECK(project_tensor(rt.tensor, ProjectionBasis::identity(full),
                         ProjectionBasis::identity(full)) == rt.tensor);
  }
}

TEST_CASE("tensor projection with distinct factor bases") {
  const Layout l1 = Layout::sized({"a", "b"}, {4, 3});
  const Layout l2 = Layout::uniform({"c"}, 5);
  const ProjectionBasis v1 = per_variable_basis(l1, 2);
  const ProjectionBasis v2 = ProjectionBasis(l2, random_pod(l2, {3}));
  const ProjectionBasis v = ProjectionBasis::concat(v1, v2);
  const auto rt = random_tensor(7, {12, 12}, 0.2);
  const std::vector<const ProjectionBasis*> in{&v, &v};
  const MatricizedTensor red = project_tensor(rt.tensor, v1, in);
  const Vector xr = random_vector(v.reduced_dim());
  const Vector expect = v1.dense().transpose() * rt.tensor.apply_power(v.lift(xr));
  CHECK(rel_diff(red.apply_power(xr), expect) <= 1e-12);
  CHECK_THROWS_AS(project_tensor(rt.tensor, v, in), DimensionError);
}

TEST_CASE("serial and OpenMP tensor projection are bitwise identical") {
  const TubularConfig cfg = small_tubular();
  const QuarticSystem q = build_tubular_quartic(cfg);
  const ProjectionBasis v = per_variable_basis(q.layout, 3);
  const std::vector<const ProjectionBasis*> in(4, &v);
  CHECK(kernels::project_tensor_serial(q.G4, v, in) == kernels::project_tensor_parallel(q.G4, v, in));
  const auto rt = random_tensor(50, {50, 50}, 0.05);
  const Layout l = Layout::sized({"a", "b"}, {20, 30});
  const ProjectionBasis w = per_variable_basis(l, 4);
  const std::vector<const ProjectionBasis*> in2(2, &w);
  CHECK(kernels::project_tensor_serial(rt.tensor, w, in2) ==
        kernels::project_tensor_parallel(rt.tensor, w, in2));
}

TEST_CASE("quartic ROM: projection identity, identity basis and shapes") {
  const TubularConfig cfg = small_tubular();
  const QuarticSystem q = build_tubular_quartic(cfg);
  const ProjectionBasis v = per_variable_basis(q.layout, 3);
  const ReducedQuartic rom = project_quartic(q, v);
  CHECK(rom.G4.in_dims() == std::vector<Index>{15, 15, 15, 15});
  CHECK(rom.G2.in_dims() == std::vector<Index>{15, 15});
  CHECK(rom.layout.block("w3").size == 3);
  const Matrix vd = v.dense();
  const Vector u{{1.0}};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector xr = random_vector(15);
    const Vector expect = vd.transpose() * eval_rhs_quartic(q, vd * xr, u);
    CHECK(rel_diff(eval_rhs_quartic(rom, xr, u), expect) <= 1e-12);
  }
  QuarticProjectionOptions large;
  large.allow_large = true;
  const ReducedQuartic same = project_quartic(q, ProjectionBasis::identity(q.layout), large);
  CHECK(same.G4 == q.G4);
  CHECK(same.G3 == q.G3);
  CHECK(Matrix(same.A) == Matrix(q.A));
  CHECK(same.B == q.B);

  const ProjectionBasis big = per_variable_basis(q.layout, 9);
  CHECK_THROWS_AS(project_quartic(q, big), BudgetError);
  QuarticProjectionOptions opts;
  opts.allow_large = true;
  CHECK(project_quartic(q, big, opts).dim() == 45);
  const ProjectionBasis wrong = per_variable_basis(Layout::uniform({"psi", "theta"}, 25), 2);
  CHECK_THROWS_AS(project_quartic(q, wrong), DimensionError);
}

TEST_CASE("QB-DAE projection: identity bases reproduce the structured system") {
  const TubularConfig cfg = small_tubular();
  const QBSystem sys = build_tubular_qbdae(cfg);
  const auto [l1, l2] = split_layout(sys.layout, sys.blocks->n1);
  const ReducedQBDAE rom =
      project_qbdae(sys, ProjectionBasis::identity(l1), ProjectionBasis::identity(l2));
  const QBSystem back = rom.assembled();
  CHECK(back.H == sys.H);
  CHECK(Matrix(back.A) == Matrix(sys.A));
  CHECK(Matrix(back.E) == Matrix(sys.E));
  CHECK(back.B == sys.B);
  CHECK(back.layout == sys.layout);
}

TEST_CASE("reduced QB-DAE keeps the algebraic block structure") {
  const TubularConfig cfg = small_tubular();
  const QBSystem sys = build_tubular_qbdae(cfg);
  const auto [l1, l2] = split_layout(sys.layout, sys.blocks->n1);
  const ProjectionBasis v1 = per_variable_basis(l1, 3);
  const ProjectionBasis v2 = per_variable_basis(l2, 2);
  const ReducedQBDAE rom = project_qbdae(sys, v1, v2);
  CHECK(rom.r1() == 15);
  CHECK(rom.r2() == 6);
  CHECK(rom.blocks.H2.in_dims() == std::vector<Index>{15, 15});
  const QBSystem a = rom.assembled();
  const Matrix ad(a.A), ed(a.E);
  CHECK(ad.bottomRightCorner(6, 6) == Matrix::Identity(6, 6));
  CHECK(ad.bottomLeftCorner(6, 15) == Matrix::Zero(6, 15));
  CHECK(ed.bottomRows(6) == Matrix::Zero(6, 21));
  CHECK(a.B.bottomRows(6) == Matrix::Zero(6, 1));
  for (const auto& e : a.H.entries()) {
    if (e.row < 15) continue;
    CHECK(e.flat / 21 < 15);
    CHECK(e.flat % 21 < 15);
  }

  // x2 of the lifted full state lies in range(V2): the reduced constraint holds.
  const Matrix v1d = v1.dense();
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x1r = random_vector(15);
    const Vector x2 = sys.blocks->H2.apply_power(Vector(v1d * x1r));
    PODBasis pod2;
    for (const auto& vb : l2.blocks()) {
      Matrix cols(vb.size, 2);
      cols.col(0) = x2.segment(vb.offset, vb.size);
      cols.col(1) = random_vector(vb.size);
      Eigen::HouseholderQR<Matrix> qr(cols);
      pod2.blocks.push_back({vb.name, qr.householderQ() * Matrix::Identity(vb.size, 2), {}, {0, 1}, 2});
    }
    const ProjectionBasis w2(l2, pod2);
    const ReducedQBDAE rr = project_qbdae(sys, v1, w2);
    Vector xr(rr.r1() + rr.r2());
    xr << x1r, w2.restrict(x2);
    CHECK(algebraic_residual(rr.blocks, xr).norm() <= 1e-12 * std::max(1.0, x2.norm()));
  }
}

TEST_CASE("QB-DAE ROM with V2 = I reproduces the quartic ROM") {
  const TubularConfig cfg = small_tubular();
  const QBSystem sys = build_tubular_qbdae(cfg);
  const QuarticSystem quartic = build_tubular_quartic(cfg);
  const auto [l1, l2] = split_layout(sys.layout, sys.blocks->n1);
  const ProjectionBasis v1 = per_variable_basis(l1, 3);
  const ReducedQBDAE rom =
      precompute_substituted_ode(project_qbdae(sys, v1, ProjectionBasis::identity(l2)));
  const ReducedQuartic qrom = project_quartic(quartic, v1);
  const PolynomialSystem sub = rom.substituted_system();
  const Vector u{{1.0}};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector xr = random_vector(15);
    CHECK(rel_diff(eval_polynomial_rhs(sub, xr, u), eval_rhs_quartic(qrom, xr, u)) <= 1e-12);
  }
}

TEST_CASE("substituted ODE equals eliminate-then-evaluate") {
  SUBCASE("random toy ROM with r1 = 2") {
    QBBlocks b;
    b.n1 = 2;
    b.n2 = 3;
    b.E11 = sparse_identity(2);
    b.A11 = random_matrix(2, 2).sparseView();
    b.A12 = random_matrix(2, 3).sparseView();
    b.B1 = random_matrix(2, 1);
    b.H1 = random_tensor(2, {5, 5}, 0.7).tensor;
    b.H2 = random_tensor(3, {2, 2}, 0.8).tensor;
    b.N11 = {SparseMatrix(random_matrix(2, 2).sparseView())};
    b.N12 = {SparseMatrix(random_matrix(2, 3).sparseView())};
    ReducedQBDAE rom;
    rom.blocks = b;
    rom.layout = Layout::sized({"x1", "x2"}, {2, 3});
    rom = precompute_substituted_ode(rom);
    CHECK(rom.substituted->ht1_columns() == 4 + 8 + 16);
    const SubstitutedQBDAEModel two_step(b, InputSignal::constant(Vector{{0.7}}));
    const PolynomialModel sub(rom.substituted_system(), InputSignal::constant(Vector{{0.7}}));
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x1 = random_vector(2);
      Vector f1, f2;
      two_step.rhs(0.0, x1, f1);
      sub.rhs(0.0, x1, f2);
      CHECK(rel_diff(f1, f2) <= 1e-13);
      Matrix j1, j2;
      two_step.jacobian_dense(0.0, x1, j1);
      sub.jacobian_dense(0.0, x1, j2);
      CHECK((j1 - j2).norm() <= 1e-13 * std::max(1.0, j1.norm()));
    }
  }
  SUBCASE("H1 = 0 gives Ht1 = 0") {
    QBBlocks b;
    b.n1 = 3;
    b.n2 = 2;
    b.E11 = sparse_identity(3);
    b.A11 = sparse_identity(3);
    b.A12 = SparseMatrix(3, 2);
    b.B1 = Matrix(3, 0);
    b.H1 = MatricizedTensor(3, {5, 5});
    b.H2 = random_tensor(2, {3, 3}, 0.5).tensor;
    ReducedQBDAE rom;
    rom.blocks = b;
    rom.layout = Layout::sized({"x1", "x2"}, {3, 2});
    rom = precompute_substituted_ode(rom);
    CHECK(rom.substituted->Ht2.empty());
    CHECK(rom.substituted->Ht3.empty());
    CHECK(rom.substituted->Ht4.empty());
  }
  SUBCASE("tubular ROM with r1 = 30, r2 = 9") {
    const TubularConfig cfg = small_tubular();
    const QBSystem sys = build_tubular_qbdae(cfg);
    const auto [l1, l2] = split_layout(sys.layout, sys.blocks->n1);
    const ProjectionBasis v1 = per_variable_basis(l1, 6);
    const ProjectionBasis v2 = per_variable_basis(l2, 3);
    const ReducedQBDAE rom = precompute_substituted_ode(project_qbdae(sys, v1, v2));
    CHECK(rom.substituted->ht1_columns() == 837'900u);
    const Vector u{{1.0}};
    const SubstitutedQBDAEModel two_step(rom.blocks, InputSignal::constant(u));
    const PolynomialModel sub(rom.substituted_system(), InputSignal::constant(u));
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x1 = random_vector(30);
      Vector f1, f2;
      two_step.rhs(0.0, x1, f1);
      sub.rhs(0.0, x1, f2);
      CHECK(rel_diff(f1, f2) <= 1e-12);
    }
    SubstitutionOptions tight;
    tight.max_bytes = 1000;
    CHECK_THROWS_AS(precompute_substituted_ode(project_qbdae(sys, v1, v2), tight), BudgetError);
    CHECK(max_operator_dimension(rom.blocks) == 39);
    CHECK(max_operator_dimension(rom.substituted_system()) == 30);
  }
}

TEST_CASE("DEIM point selection and exactness") {
  SUBCASE("exact span reproduces f") {
    const Matrix basis = random_matrix(40, 4);
    const Matrix snaps = basis * random_matrix(4, 30);
    const DEIMOperator d = deim_build(snaps, 4);
    const Vector f = basis * random_vector(4);
    CHECK(rel_diff(d.approximate(f), f) <= 1e-12);
    CHECK_THROWS_AS(deim_build(snaps, 5), RankError);
  }
  SUBCASE("Fourier modes: distinct points, decreasing residual") {
    const Index n = 200;
    Matrix u(n, 12);
    for (Index i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      for (Index k = 0; k < 12; ++k) {
        u(i, k) = k % 2 == 0 ? std::cos(std::numbers::pi * static_cast<double>(k / 2) * s)
                             : std::sin(std::numbers::pi * static_cast<double>(k / 2 + 1) * s);
      }
    }
    const Vector f = (Eigen::ArrayXd::LinSpaced(n, 0.0, 1.0) * 3.0).exp().matrix();
    Matrix snaps(n, 40);
    for (Index j = 0; j < 40; ++j) {
      snaps.col(j) = (Eigen::ArrayXd::LinSpaced(n, 0.0, 1.0) * (0.1 * static_cast<double>(j))).exp().matrix();
    }
    double prev = INFINITY;
    for (Index r : {2, 4, 6, 8}) {
      const DEIMOperator d = deim_build(snaps, r);
      const std::set<Index> uniq(d.indices.begin(), d.indices.end());
      CHECK(uniq.size() == static_cast<std::size_t>(r));
      const double res = (d.approximate(f) - f).norm() / f.norm();
      CHECK(res < prev);
      prev = res;
    }
    const std::vector<Index> p = deim_indices(Eigen::HouseholderQR<Matrix>(u).householderQ() *
                                              Matrix::Identity(n, 12));
    CHECK(std::set<Index>(p.begin(), p.end()).size() == 12);
  }
  SUBCASE("ties go to the smallest index") {
    const Matrix u = Matrix::Ones(5, 1);
    CHECK(deim_indices(u) == std::vector<Index>{0});
    Matrix u2(4, 2);
    u2 << 1, 0, 0, 1, 0, 1, 1, 0;
    CHECK(deim_indices(u2) == std::vector<Index>{0, 1});
  }
  SUBCASE("interpolation is exact at the selected rows") {
    const Matrix snaps = random_matrix(60, 25);
    const DEIMOperator d = deim_build(snaps, 10);
    const Vector f = random_vector(60);
    const Vector approx = d.approximate(f);
    for (Index p : d.indices) CHECK(std::abs(approx[p] - f[p]) <= 1e-12 * f.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("POD-DEIM ROM") {
  const TubularConfig cfg = small_tubular();
  const GeneralNonlinearSystem fom = build_tubular_fom(cfg);
  const ProjectionBasis v = constant_including_basis(fom.layout, 4);
  const Matrix vd = v.dense();
  Matrix snaps(fom.g->size(), 30);
  for (Index j = 0; j < 30; ++j) {
    snaps.col(j) = fom.g->evaluate(positive_theta_state(fom.layout, random_vector(fom.dim())));
  }
  const DEIMOperator deim = deim_build(snaps, 6);
  const PodDeimRom rom = build_pod_deim_rom(fom, v, deim);
  CHECK(rom.max_operator_dimension() < fom.dim());
  CHECK(rom.M.rows() == 8);
  CHECK(rom.M.cols() == 6);

  SUBCASE("sampled components match full evaluation") {
    const Vector xr = v.restrict(positive_theta_state(fom.layout, 0.1 * random_vector(fom.dim())));
    const Vector full = fom.g->evaluate(vd * xr);
    const Vector sampled = rom.sampled_nonlinearity(xr);
    for (std::size_t l = 0; l < rom.indices.size(); ++l) {
      CHECK(std::abs(sampled[static_cast<Index>(l)] - full[rom.indices[l]]) <=
            1e-14 * std::max(1.0, std::abs(full[rom.indices[l]])));
    }
  }
  SUBCASE("Jacobian matches finite differences") {
    const PodDeimModel model(rom, tubular_input());
    const Vector xr = v.restrict(positive_theta_state(fom.layout, 0.1 * random_vector(fom.dim())));
    Matrix jac;
    model.jacobian_dense(0.0, xr, jac);
    Matrix fd(8, 8);
    for (Index j = 0; j < 8; ++j) {
      Vector xp = xr, xm = xr, fp, fm;
      xp[j] += 1e-6;
      xm[j] -= 1e-6;
      model.rhs(0.0, xp, fp);
      model.rhs(0.0, xm, fm);
      fd.col(j) = (fp - fm) / 2e-6;
    }
    CHECK((jac - fd).norm() <= 1e-6 * std::max(1.0, jac.norm()));

    const PodGalerkinModel pod(fom, v, tubular_input());
    pod.jacobian_dense(0.0, xr, jac);
    for (Index j = 0; j < 8; ++j) {
      Vector xp = xr, xm = xr, fp, fm;
      xp[j] += 1e-6;
      xm[j] -= 1e-6;
      pod.rhs(0.0, xp, fp);
      pod.rhs(0.0, xm, fm);
      fd.col(j) = (fp - fm) / 2e-6;
    }
    CHECK((jac - fd).norm() <= 1e-6 * std::max(1.0, jac.norm()));
  }
  SUBCASE("linear FOM: POD-DEIM equals plain POD") {
    GeneralNonlinearSystem lin = fom;
    lin.F = SparseMatrix(fom.dim(), fom.g->size());
    const PodDeimModel a(build_pod_deim_rom(lin, v, deim), tubular_input());
    const PodGalerkinModel b(lin, v, tubular_input());
    const Vector xr = v.restrict(positive_theta_state(fom.layout, 0.1 * random_vector(fom.dim())));
    Vector fa, fb;
    a.rhs(0.3, xr, fa);
    b.rhs(0.3, xr, fb);
    CHECK(rel_diff(fa, fb) <= 1e-15);
  }
  SUBCASE("errors") {
    DEIMOperator bad = deim;
    bad.indices[0] = fom.g->size();
    CHECK_THROWS_AS(build_pod_deim_rom(fom, v, bad), DimensionError);
    const ProjectionBasis wrong = per_variable_basis(Layout::uniform({"psi", "theta"}, 9), 2);
    CHECK_THROWS_AS(build_pod_deim_rom(fom, wrong, deim), DimensionError);
  }
}

TEST_CASE("FHN QB ROM operators stay reduced") {
  FHNConfig cfg;
  cfg.n = 20;
  const QBSystem qb = build_fhn_lifted_qb(cfg);
  const ProjectionBasis v = per_variable_basis(qb.layout, 3);
  const QBSystem rom = project_qb(qb, v);
  CHECK(max_operator_dimension(rom.to_polynomial()) == 9);
  const Matrix ed(rom.E);
  CHECK((ed - Vector{{cfg.epsilon, cfg.epsilon, cfg.epsilon, 1, 1, 1, cfg.epsilon, cfg.epsilon,
                      cfg.epsilon}}.asDiagonal().toDenseMatrix()).norm() <= 1e-14);
  const Vector u = random_vector(2);
  const Vector xr = random_vector(9);
  const Matrix vd = v.dense();
  CHECK(rel_diff(eval_rhs_qb(rom, xr, u), vd.transpose() * eval_rhs_qb(qb, vd * xr, u)) <= 1e-12);
}
