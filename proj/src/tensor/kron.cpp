#include "liftrom/tensor/kron.hpp"

#include "liftrom/errors.hpp"

namespace liftrom {

Vector kron_vec(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (Index i = 0; i < x.size(); ++i) {
    out.segment(i * y.size(), y.size()) = x[i] * y;
  }
  return out;
}

Vector kron_power(const Vector& x, int k) {
  if (k < 1) throw DimensionError("kron_power: order must be at least 1");
  Vector out = x;
  for (int i = 1; i < k; ++i) out = kron_vec(out, x);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace liftrom
