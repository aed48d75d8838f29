#pragma once

#include "liftrom/tensor/kron.hpp"
#include "liftrom/tensor/matricized_tensor.hpp"
#include "liftrom/types.hpp"

#include <random>
#include <vector>

namespace liftrom::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline Vector random_vector(Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng());
  return v;
}

inline Matrix random_matrix(Index r, Index c) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(rng());
  return m;
}

inline Matrix random_orthonormal(Index n, Index r) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, r));
  return qr.householderQ() * Matrix::Identity(n, r);
}

/// Random sparse order-k tensor with about `density` of entries set; also
/// returns the dense matricization assembled independently of the class.
struct RandomTensor {
  MatricizedTensor tensor;
  Matrix dense;
};

inline RandomTensor random_tensor(Index out, std::vector<Index> dims, double density) {
  std::uint64_t cols = 1;
  for (Index d : dims) cols *= static_cast<std::uint64_t>(d);
  Matrix dense = Matrix::Zero(out, static_cast<Index>(cols));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<TensorEntry> entries;
  for (Index i = 0; i < out; ++i) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      if (u(rng()) < density) {
        const double v = g(rng());
        dense(i, static_cast<Index>(c)) = v;
        entries.push_back({i, c, v});
      }
    }
  }
  return {MatricizedTensor::from_entries(out, dims, entries), dense};
}

/// Dense oracle: G_dense * (x_1 (x) ... (x) x_k).
inline Vector dense_apply(const Matrix& g, const std::vector<Vector>& xs) {
  Vector k = xs.front();
  for (std::size_t q = 1; q < xs.size(); ++q) k = kron_vec(k, xs[q]);
  return g * k;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

}  // namespace liftrom::testing
