#include "doctest.h"
#include "test_support.hpp"

#include "liftrom/errors.hpp"
#include "liftrom/tensor/kron.hpp"
#include "liftrom/tensor/linalg.hpp"
#include "liftrom/tensor/matricized_tensor.hpp"
#include "liftrom/tensor/serialize.hpp"

#include <cmath>

using namespace liftrom;
using namespace liftrom::testing;

TEST_CASE("kron_vec hand examples") {
  CHECK(kron_vec(Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}) == Vector{{0.0, 1.0, 0.0, 0.0}});
  CHECK(kron_vec(Vector{{1.0}}, Vector{{3.5, -2.0}}) == Vector{{3.5, -2.0}});
  CHECK(kron_vec(Vector{{2.0, 3.0}}, Vector{{4.0, 5.0}}) == Vector{{8.0, 10.0, 12.0, 15.0}});
  CHECK(kron_vec(Vector(0), Vector{{1.0}}).size() == 0);
}

TEST_CASE("kron_vec is bilinear") {
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = random_vector(1)[0] * 5.0;
    const Vector x = random_vector(4), y = random_vector(3), z = random_vector(3);
    CHECK(rel_diff(kron_vec(alpha * x, y), alpha * kron_vec(x, y)) < 1e-15);
    CHECK(rel_diff(kron_vec(x, y + z), kron_vec(x, y) + kron_vec(x, z)) < 1e-15);
  }
}

TEST_CASE("Kronecker mixed-product identity (AC)(x)(BD) = (A(x)B)(C(x)D)") {
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(3, 4), c = random_matrix(4, 2);
    const Matrix b = random_matrix(2, 5), d = random_matrix(5, 3);
    const Matrix lhs = kron(a * c, b * d);
    const Matrix rhs = kron(a, b) * kron(c, d);
    CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
  }
}

TEST_CASE("apply_matricized reproduces the scalar example entry H_{2,3} = 2") {
  // 1-based (2,3) -> 0-based row 1, flat 2 = sub-indices (0, 2).
  const auto h = MatricizedTensor::from_entries(4, {4, 4}, {{1, 2, 2.0}});
  const Vector x{{0.7, -1.3, 2.1, 0.4}};
  const std::vector<Vector> xs{x, x};
  const Vector out = apply_matricized(h, xs);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == doctest::Approx(2.0 * 0.7 * 2.1).epsilon(1e-15));
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
}

TEST_CASE("zero tensor applies to zero") {
  MatricizedTensor g(3, {2, 2, 2});
  const std::vector<Vector> xs(3, random_vector(2));
  CHECK(apply_matricized(g, xs) == Vector::Zero(3));
}

TEST_CASE("random 3x9 tensor matches dense oracle") {
  const auto rt = random_tensor(3, {3, 3}, 1.0);
  const Vector x = random_vector(3);
  const Vector got = rt.tensor.apply_power(x);
  const Vector expect = dense_apply(rt.dense, {x, x});
  CHECK((got - expect).norm() <= 1e-13 * std::max(1.0, expect.norm()));
}

TEST_CASE("dense-oracle equivalence for all shapes with prod(in_dims) <= 1e4") {
  const std::vector<std::vector<Index>> shapes = {
      {5, 7}, {12, 12}, {100, 100}, {3, 4, 5}, {21, 21, 21}, {4, 3, 2, 5}, {10, 10, 10, 10}};
  for (const auto& dims : shapes) {
    const auto rt = random_tensor(6, dims, 0.05);
    std::vector<Vector> xs;
    for (Index d : dims) xs.push_back(random_vector(d));
    const Vector got = apply_matricized(rt.tensor, xs);
    const Vector expect = dense_apply(rt.dense, xs);
    CHECK((got - expect).norm() <= 1e-13 * std::max(1.0, expect.norm()));
    CHECK((rt.tensor.to_dense() - rt.dense).norm() == 0.0);
  }
}

TEST_CASE("dimension mismatch names the offending factor") {
  MatricizedTensor g(2, {3, 4});
  const std::vector<Vector> xs{random_vector(3), random_vector(5)};
  try {
    apply_matricized(g, xs);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("factor 1") != std::string::npos);
  }
  const std::vector<Vector> too_few{random_vector(3)};
  CHECK_THROWS_AS(apply_matricized(g, too_few), DimensionError);
}

TEST_CASE("duplicate entries are summed and exact cancellations dropped") {
  const auto g = MatricizedTensor::from_entries(
      2, {2, 2}, {{0, 1, 1.5}, {0, 1, 2.0}, {1, 3, 1.0}, {1, 3, -1.0}, {1, 0, 4.0}});
  CHECK(g.nnz() == 2);
  const auto e = g.entries();
  CHECK(e[0].row == 0);
  CHECK(e[0].flat == 1);
  CHECK(e[0].value == 3.5);
  CHECK(e[1].row == 1);
  CHECK(e[1].flat == 0);
  CHECK_THROWS_AS(MatricizedTensor::from_entries(2, {2, 2}, {{0, 4, 1.0}}), DimensionError);
  CHECK_THROWS_AS(MatricizedTensor::from_entries(2, {2, 2}, {{2, 0, 1.0}}), DimensionError);
}

TEST_CASE("flat index is lexicographic and decode inverts it") {
  MatricizedTensor g(1, {4, 4, 4, 4});
  // 1-based H_{3,12}: column 12 -> 0-based flat 11 -> (w2, w3) in a 4x16 tensor
  MatricizedTensor h(4, {4, 4});
  std::vector<Index> sub(2);
  h.decode(11, sub);
  CHECK(sub[0] == 2);
  CHECK(sub[1] == 3);
  for (std::uint64_t flat : {0ull, 1ull, 17ull, 200ull, 255ull}) {
    std::vector<Index> s(4);
    g.decode(flat, s);
    CHECK(g.flat_index(s) == flat);
  }
}

TEST_CASE("power Jacobian matches finite differences and dense assembly paths agree") {
  for (int order = 2; order <= 4; ++order) {
    std::vector<Index> dims(static_cast<std::size_t>(order), 5);
    const auto rt = random_tensor(4, dims, 0.3);
    const Vector x = random_vector(5);
    Matrix jac = Matrix::Zero(4, 5);
    rt.tensor.add_power_jacobian(x, 1.0, jac);
    Matrix fd(4, 5);
    const double h = 1e-6;
    for (Index j = 0; j < 5; ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      fd.col(j) = (rt.tensor.apply_power(xp) - rt.tensor.apply_power(xm)) / (2 * h);
    }
    CHECK((jac - fd).norm() <= 1e-7 * std::max(1.0, jac.norm()));

    std::vector<Triplet> trips;
    rt.tensor.add_power_jacobian(x, 1.0, trips);
    SparseMatrix sj(4, 5);
    sj.setFromTriplets(trips.begin(), trips.end());
    CHECK((Matrix(sj) - jac).norm() <= 1e-14 * std::max(1.0, jac.norm()));
  }
}

TEST_CASE("serial and OpenMP kernels are bitwise identical") {
  const auto rt = random_tensor(40, {30, 30, 30}, 0.02);
  const Vector x = random_vector(30);
  const double* f[3] = {x.data(), x.data(), x.data()};
  Vector a = Vector::Zero(40), b = Vector::Zero(40);
  kernels::contract_serial(rt.tensor, f, 0.5, a.data());
  kernels::contract_parallel(rt.tensor, f, 0.5, b.data());
  CHECK(a == b);
  Matrix ja = Matrix::Zero(40, 30), jb = Matrix::Zero(40, 30);
  kernels::power_jacobian_serial(rt.tensor, x.data(), 2.0, ja);
  kernels::power_jacobian_parallel(rt.tensor, x.data(), 2.0, jb);
  CHECK(ja == jb);
}

TEST_CASE("tensor JSON round trip preserves the operator exactly") {
  const auto rt = random_tensor(5, {4, 3, 2}, 0.4);
  const auto back = tensor_from_json(tensor_to_json(rt.tensor));
  CHECK(back == rt.tensor);
  const Matrix m = random_matrix(3, 4);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  const auto j = tensor_to_json(MatricizedTensor::from_entries(2, {2, 2}, {{1, 3, 0.25}}));
  CHECK(j.dump() == R"({"in_dims":[2,2],"nnz":[[1,3,0.25]],"order":2,"out_dim":2})");
}

TEST_CASE("thin_svd examples") {
  SUBCASE("identity") {
    const auto s = thin_svd(Matrix::Identity(3, 3));
    CHECK((s.sigma - Vector::Ones(3)).norm() < 1e-15);
  }
  SUBCASE("rank one") {
    const Vector u = random_vector(6).normalized();
    const Vector v = random_vector(4).normalized();
    const auto s = thin_svd(u * v.transpose());
    CHECK(s.sigma[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (Index i = 1; i < s.sigma.size(); ++i) CHECK(std::abs(s.sigma[i]) < 1e-14);
  }
  SUBCASE("random 50x10 reconstruction and orthonormality") {
    const Matrix x = random_matrix(50, 10);
    const auto s = thin_svd(x);
    const Matrix rec = s.U * s.sigma.asDiagonal() * s.W.transpose();
    CHECK((x - rec).norm() <= 1e-10 * x.norm());
    CHECK(orthonormality_defect(s.U) <= 1e-12);
    CHECK(orthonormality_defect(s.W) <= 1e-12);
    for (Index i = 1; i < s.sigma.size(); ++i) CHECK(s.sigma[i] <= s.sigma[i - 1]);
  }
  SUBCASE("non-finite input") {
    Matrix x = Matrix::Ones(3, 3);
    x(1, 1) = std::nan("");
    CHECK_THROWS_AS(thin_svd(x), DomainError);
  }
}

TEST_CASE("method of snapshots agrees with thin_svd") {
  SUBCASE("identity, r = 2") {
    const Matrix v = method_of_snapshots(Matrix::Identity(4, 4), 2);
    CHECK(orthonormality_defect(v) < 1e-14);
    for (Index j = 0; j < 2; ++j) CHECK(v.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  }
  SUBCASE("rank-3 200x20") {
    const Matrix x = random_matrix(200, 3) * random_matrix(3, 20);
    const Matrix mos = method_of_snapshots(x, 3);
    const Matrix svd = thin_svd(x).U.leftCols(3);
    CHECK(subspace_angle(svd, mos) <= 1e-8);
    CHECK(orthonormality_defect(mos) <= 1e-12);
  }
  SUBCASE("r = 1 recovers the dominant direction up to sign") {
    const Vector u = random_vector(80).normalized();
    const Matrix x = 1e3 * u * random_vector(12).normalized().transpose() + 1e-3 * random_matrix(80, 12);
    const Matrix mos = method_of_snapshots(x, 1);
    const Vector u1 = thin_svd(x).U.col(0);
    CHECK(std::min((mos.col(0) - u1).norm(), (mos.col(0) + u1).norm()) <= 1e-8);
  }
  SUBCASE("r beyond numerical rank") {
    const Matrix x = random_matrix(30, 2) * random_matrix(2, 8);
    try {
      method_of_snapshots(x, 4);
      FAIL("expected RankError");
    } catch (const RankError& e) {
      CHECK(e.numerical_rank() == 2);
    }
  }
}
