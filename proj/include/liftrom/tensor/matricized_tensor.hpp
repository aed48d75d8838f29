#pragma once

#include "liftrom/types.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace liftrom {

/// Nonzero of a matricized tensor in COO form. `flat` is the lexicographic
/// (Kronecker) column index: for sub-indices (j_1, ..., j_k) over dims
/// (d_1, ..., d_k), flat = ((j_1 * d_2 + j_2) * d_3 + j_3) ...
struct TensorEntry {
  Index row;
  std::uint64_t flat;
  double value;
};

/// Sparse order-k operator G mapping x_1 (x) x_2 (x) ... (x) x_k to an
/// out_dim vector, stored as the n x prod(in_dims) matricization.
///
/// Entries are kept sorted by (row, flat) with duplicates summed and exact
/// zeros dropped. Sub-indices are decoded once at assembly so evaluation never
/// materializes a Kronecker vector.
class MatricizedTensor {
 public:
  MatricizedTensor() = default;
  /// Zero tensor.
  MatricizedTensor(Index out_dim, std::vector<Index> in_dims);

  /// COO assembly; duplicate (row, flat) pairs are summed.
  static MatricizedTensor from_entries(Index out_dim, std::vector<Index> in_dims,
                                       std::vector<TensorEntry> entries);

  Index out_dim() const { return out_dim_; }
  int order() const { return static_cast<int>(in_dims_.size()); }
  const std::vector<Index>& in_dims() const { return in_dims_; }
  std::uint64_t flat_size() const { return flat_size_; }
  std::size_t nnz() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::uint64_t flat_index(std::span<const Index> sub) const;
  void decode(std::uint64_t flat, std::span<Index> sub) const;

  // Raw CSR-like access: entries of row r live in [row_ptr[r], row_ptr[r+1]).
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const double> values() const { return values_; }
  /// Sub-indices of entry e: sub_indices()[e*order() + q].
  std::span<const std::int32_t> sub_indices() const { return sub_; }

  Index row_of(std::size_t entry) const;
  std::uint64_t flat_of(std::size_t entry) const;
  std::vector<TensorEntry> entries() const;

  /// G (x_1 (x) ... (x) x_k) for distinct factors.
  Vector apply(std::span<const Vector> xs) const;
  /// G (x (x) ... (x) x).
  Vector apply_power(const Vector& x) const;
  /// out += scale * G (x (x) ... (x) x).
  void add_apply_power(const Vector& x, double scale, Vector& out) const;

  /// d/dx [G x^(k)] accumulated into a dense Jacobian with a scale factor.
  void add_power_jacobian(const Vector& x, double scale, Matrix& jac) const;
  /// Same derivative emitted as triplets (row, col, value), with a column offset.
  void add_power_jacobian(const Vector& x, double scale, std::vector<Triplet>& out,
                          Index col_offset = 0) const;

  MatricizedTensor scaled(double factor) const;

  /// Dense n x prod(in_dims) matrix; refuses more than `max_entries` entries.
  Matrix to_dense(std::uint64_t max_entries = 50'000'000) const;

  friend bool operator==(const MatricizedTensor& a, const MatricizedTensor& b);

 private:
  void check_factor_dims(std::span<const Vector> xs) const;

  Index out_dim_ = 0;
  std::vector<Index> in_dims_;
  std::uint64_t flat_size_ = 0;
  std::vector<std::size_t> row_ptr_ = {0};
  std::vector<std::int32_t> sub_;
  std::vector<double> values_;
};

/// Incremental COO builder for MatricizedTensor.
class TensorBuilder {
 public:
  TensorBuilder(Index out_dim, std::vector<Index> in_dims);

  void add(Index row, std::initializer_list<Index> sub, double value);
  void add(Index row, std::span<const Index> sub, double value);
  void add_flat(Index row, std::uint64_t flat, double value);
  void reserve(std::size_t n) { entries_.reserve(n); }

  MatricizedTensor build() &&;

 private:
  MatricizedTensor shape_;
  std::vector<TensorEntry> entries_;
};

/// apply_matricized(G, xs): G (xs[0] (x) xs[1] (x) ...).
Vector apply_matricized(const MatricizedTensor& g, std::span<const Vector> xs);

namespace kernels {

/// out[i] += scale * sum_e G_e * prod_q factors[q][sub_e,q] over rows i.
/// The serial form is the reference; the parallel form splits rows across
/// OpenMP threads and keeps per-row summation order, so both are bitwise equal.
void contract_serial(const MatricizedTensor& g, std::span<const double* const> factors,
                     double scale, double* out);
void contract_parallel(const MatricizedTensor& g, std::span<const double* const> factors,
                       double scale, double* out);

void power_jacobian_serial(const MatricizedTensor& g, const double* x, double scale,
                           Matrix& jac);
void power_jacobian_parallel(const MatricizedTensor& g, const double* x, double scale,
                             Matrix& jac);

/// Entries below this count always run serially.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

}  // namespace kernels

}  // namespace liftrom
