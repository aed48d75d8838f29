#include "liftrom/models/scalar_example.hpp"

#include <cmath>

namespace liftrom::scalar_example {

namespace {

SparseMatrix from_dense(const Matrix& m) { return m.sparseView(); }

}  // namespace

QuarticSystem quartic() {
  QuarticSystem s;
  s.A = SparseMatrix(1, 1);
  s.B = Matrix::Ones(1, 1);
  s.G2 = MatricizedTensor(1, {1, 1});
  s.G3 = MatricizedTensor(1, {1, 1, 1});
  s.G4 = MatricizedTensor::from_entries(1, {1, 1, 1, 1}, {{0, 0, 1.0}});
  s.N1 = {SparseMatrix(1, 1)};
  s.N2 = {MatricizedTensor(1, {1, 1})};
  s.layout = Layout::uniform({"x"}, 1);
  return s;
}

QBSystem qb_ode() {
  QBSystem s;
  s.E = from_dense(Matrix::Identity(4, 4));
  Matrix a = Matrix::Zero(4, 4);
  a(0, 2) = 1;
  s.A = from_dense(a);
  Matrix n1 = Matrix::Zero(4, 4);
  n1(1, 0) = 2;
  n1(2, 3) = 4;
  n1(3, 1) = 3;
  s.N = {from_dense(n1)};
  s.B = Matrix::Zero(4, 1);
  s.B(0, 0) = 1;
  // 1-based H_{2,3}, H_{3,12}, H_{4,7}.
  s.H = MatricizedTensor::from_entries(4, {4, 4}, {{1, 2, 2.0}, {2, 11, 4.0}, {3, 6, 3.0}});
  s.layout = Layout::uniform({"x", "w1", "w2", "w3"}, 1);
  s.validate();
  return s;
}

QBSystem qb_dae() {
  QBBlocks b;
  b.n1 = 1;
  b.n2 = 1;
  b.E11 = from_dense(Matrix::Ones(1, 1));
  b.A11 = SparseMatrix(1, 1);
  b.A12 = SparseMatrix(1, 1);
  b.B1 = Matrix::Ones(1, 1);
  b.H1 = MatricizedTensor::from_entries(1, {2, 2}, {{0, 3, 1.0}});
  b.H2 = MatricizedTensor::from_entries(1, {1, 1}, {{0, 0, 1.0}});
  b.N11 = {SparseMatrix(1, 1)};
  b.N12 = {SparseMatrix(1, 1)};
  return QBSystem::from_blocks(std::move(b), Layout::uniform({"x", "w1"}, 1));
}

Vector qb_ode_state(double x) { return Vector{{x, x * x, x * x * x * x, x * x * x}}; }

Vector qb_dae_state(double x) { return Vector{{x, x * x}}; }

double analytic(double x0, double t) { return std::cbrt(1.0 / (1.0 / (x0 * x0 * x0) - 3.0 * t)); }

}  // namespace liftrom::scalar_example
