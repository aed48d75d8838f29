#include "liftrom/tensor/matricized_tensor.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liftrom {

namespace {

std::uint64_t checked_flat_size(const std::vector<Index>& dims) {
  std::uint64_t size = 1;
  for (Index d : dims) {
    if (d < 0) throw DimensionError("MatricizedTensor: negative input dimension");
    if (d > std::numeric_limits<std::int32_t>::max()) {
      throw DimensionError("MatricizedTensor: input dimension exceeds 32-bit index range");
    }
    const auto ud = static_cast<std::uint64_t>(d);
    if (ud != 0 && size > std::numeric_limits<std::uint64_t>::max() / ud) {
      throw DimensionError("MatricizedTensor: flat column space overflows 64 bits");
    }
    size *= ud;
  }
  return size;
}

template <int K>
inline double entry_product(const std::int32_t* sub, const double* const* f, double v, int order) {
  if constexpr (K == 2) {
    return v * f[0][sub[0]] * f[1][sub[1]];
  } else if constexpr (K == 3) {
    return v * f[0][sub[0]] * f[1][sub[1]] * f[2][sub[2]];
  } else if constexpr (K == 4) {
    return v * f[0][sub[0]] * f[1][sub[1]] * f[2][sub[2]] * f[3][sub[3]];
  } else {
    for (int q = 0; q < order; ++q) v *= f[q][sub[q]];
    return v;
  }
}

template <int K>
inline void contract_row(const MatricizedTensor& g, Index row, const double* const* f, double scale,
                         double* out) {
  const auto ptr = g.row_ptr();
  const auto vals = g.values();
  const auto sub = g.sub_indices();
  const int order = g.order();
  double acc = 0.0;
  for (std::size_t e = ptr[row]; e < ptr[row + 1]; ++e) {
    acc += entry_product<K>(sub.data() + e * order, f, vals[e], order);
  }
  out[row] += scale * acc;
}

template <int K>
void contract_rows(const MatricizedTensor& g, const double* const* f, double scale, double* out,
                   bool parallel) {
  const Index rows = g.out_dim();
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Index r = 0; r < rows; ++r) contract_row<K>(g, r, f, scale, out);
  } else {
    for (Index r = 0; r < rows; ++r) contract_row<K>(g, r, f, scale, out);
  }
}

void dispatch_contract(const MatricizedTensor& g, std::span<const double* const> factors,
                       double scale, double* out, bool parallel) {
  if (static_cast<int>(factors.size()) != g.order()) {
    throw DimensionError("contract: expected " + std::to_string(g.order()) + " factors, got " +
                         std::to_string(factors.size()));
  }
  switch (g.order()) {
    case 2: contract_rows<2>(g, factors.data(), scale, out, parallel); break;
    case 3: contract_rows<3>(g, factors.data(), scale, out, parallel); break;
    case 4: contract_rows<4>(g, factors.data(), scale, out, parallel); break;
    default: contract_rows<0>(g, factors.data(), scale, out, parallel); break;
  }
}

// Derivative of row r of G x^(k) w.r.t. x[sub_p] is v * prod_{q != p} x[sub_q].
inline void jacobian_row(const MatricizedTensor& g, Index row, const double* x, double scale,
                         Matrix& jac) {
  const auto ptr = g.row_ptr();
  const auto vals = g.values();
  const auto sub = g.sub_indices();
  const int order = g.order();
  for (std::size_t e = ptr[row]; e < ptr[row + 1]; ++e) {
    const std::int32_t* s = sub.data() + e * order;
    for (int p = 0; p < order; ++p) {
      double d = scale * vals[e];
      for (int q = 0; q < order; ++q) {
        if (q != p) d *= x[s[q]];
      }
      jac(row, s[p]) += d;
    }
  }
}

bool use_parallel(const MatricizedTensor& g) {
#ifdef _OPENMP
  return g.nnz() >= kernels::kParallelThreshold && omp_get_max_threads() > 1;
#else
  (void)g;
  return false;
#endif
}

}  // namespace

MatricizedTensor::MatricizedTensor(Index out_dim, std::vector<Index> in_dims)
    : out_dim_(out_dim), in_dims_(std::move(in_dims)) {
  if (out_dim_ < 0) throw DimensionError("MatricizedTensor: negative output dimension");
  if (in_dims_.size() < 2) throw DimensionError("MatricizedTensor: order must be at least 2");
  flat_size_ = checked_flat_size(in_dims_);
  row_ptr_.assign(static_cast<std::size_t>(out_dim_) + 1, 0);
}

MatricizedTensor MatricizedTensor::from_entries(Index out_dim, std::vector<Index> in_dims,
                                                std::vector<TensorEntry> entries) {
  MatricizedTensor t(out_dim, std::move(in_dims));
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= out_dim) {
      throw DimensionError("MatricizedTensor: row " + std::to_string(e.row) +
                           " outside output dimension " + std::to_string(out_dim));
    }
    if (e.flat >= t.flat_size_) {
      throw DimensionError("MatricizedTensor: flat index " + std::to_string(e.flat) +
                           " outside column space " + std::to_string(t.flat_size_));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const TensorEntry& a, const TensorEntry& b) {
    return a.row != b.row ? a.row < b.row : a.flat < b.flat;
  });

  const int k = t.order();
  std::vector<Index> sub(static_cast<std::size_t>(k));
  t.values_.reserve(entries.size());
  t.sub_.reserve(entries.size() * static_cast<std::size_t>(k));
  std::vector<std::size_t> counts(static_cast<std::size_t>(out_dim), 0);

  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].flat == entries[i].flat) {
      sum += entries[j].value;
      ++j;
    }
    if (sum != 0.0) {
      t.decode(entries[i].flat, sub);
      for (Index s : sub) t.sub_.push_back(static_cast<std::int32_t>(s));
      t.values_.push_back(sum);
      ++counts[static_cast<std::size_t>(entries[i].row)];
    }
    i = j;
  }
  for (Index r = 0; r < out_dim; ++r) {
    t.row_ptr_[static_cast<std::size_t>(r) + 1] =
        t.row_ptr_[static_cast<std::size_t>(r)] + counts[static_cast<std::size_t>(r)];
  }
  return t;
}

std::uint64_t MatricizedTensor::flat_index(std::span<const Index> sub) const {
  if (sub.size() != in_dims_.size()) {
    throw DimensionError("flat_index: expected " + std::to_string(in_dims_.size()) +
                         " sub-indices");
  }
  std::uint64_t flat = 0;
  for (std::size_t q = 0; q < sub.size(); ++q) {
    if (sub[q] < 0 || sub[q] >= in_dims_[q]) {
      throw DimensionError("flat_index: sub-index " + std::to_string(sub[q]) + " of factor " +
                           std::to_string(q) + " outside dimension " +
                           std::to_string(in_dims_[q]));
    }
    flat = flat * static_cast<std::uint64_t>(in_dims_[q]) + static_cast<std::uint64_t>(sub[q]);
  }
  return flat;
}

void MatricizedTensor::decode(std::uint64_t flat, std::span<Index> sub) const {
  for (std::size_t q = in_dims_.size(); q-- > 0;) {
    const auto d = static_cast<std::uint64_t>(in_dims_[q]);
    sub[q] = static_cast<Index>(flat % d);
    flat /= d;
  }
}

Index MatricizedTensor::row_of(std::size_t entry) const {
  const auto it = std::upper_bound(row_ptr_.begin(), row_ptr_.end(), entry);
  return static_cast<Index>(it - row_ptr_.begin()) - 1;
}

std::uint64_t MatricizedTensor::flat_of(std::size_t entry) const {
  std::uint64_t flat = 0;
  const int k = order();
  for (int q = 0; q < k; ++q) {
    flat = flat * static_cast<std::uint64_t>(in_dims_[static_cast<std::size_t>(q)]) +
           static_cast<std::uint64_t>(sub_[entry * static_cast<std::size_t>(k) + q]);
  }
  return flat;
}

std::vector<TensorEntry> MatricizedTensor::entries() const {
  std::vector<TensorEntry> out;
  out.reserve(nnz());
  for (Index r = 0; r < out_dim_; ++r) {
    for (std::size_t e = row_ptr_[static_cast<std::size_t>(r)];
         e < row_ptr_[static_cast<std::size_t>(r) + 1]; ++e) {
      out.push_back({r, flat_of(e), values_[e]});
    }
  }
  return out;
}

void MatricizedTensor::check_factor_dims(std::span<const Vector> xs) const {
  if (static_cast<int>(xs.size()) != order()) {
    throw DimensionError("apply_matricized: tensor of order " + std::to_string(order()) +
                         " given " + std::to_string(xs.size()) + " factors");
  }
  for (std::size_t q = 0; q < xs.size(); ++q) {
    if (xs[q].size() != in_dims_[q]) {
      throw DimensionError("apply_matricized: factor " + std::to_string(q) + " has length " +
                           std::to_string(xs[q].size()) + ", expected " +
                           std::to_string(in_dims_[q]));
    }
  }
}

Vector MatricizedTensor::apply(std::span<const Vector> xs) const {
  check_factor_dims(xs);
  std::vector<const double*> f(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q) f[q] = xs[q].data();
  Vector out = Vector::Zero(out_dim_);
  dispatch_contract(*this, f, 1.0, out.data(), use_parallel(*this));
  return out;
}

Vector MatricizedTensor::apply_power(const Vector& x) const {
  Vector out = Vector::Zero(out_dim_);
  add_apply_power(x, 1.0, out);
  return out;
}

void MatricizedTensor::add_apply_power(const Vector& x, double scale, Vector& out) const {
  for (std::size_t q = 0; q < in_dims_.size(); ++q) {
    if (in_dims_[q] != x.size()) {
      throw DimensionError("apply_power: factor " + std::to_string(q) + " expects length " +
                           std::to_string(in_dims_[q]) + ", got " + std::to_string(x.size()));
    }
  }
  if (out.size() != out_dim_) throw DimensionError("apply_power: output length mismatch");
  std::vector<const double*> f(in_dims_.size(), x.data());
  dispatch_contract(*this, f, scale, out.data(), use_parallel(*this));
}

void MatricizedTensor::add_power_jacobian(const Vector& x, double scale, Matrix& jac) const {
  if (jac.rows() != out_dim_ || jac.cols() != x.size()) {
    throw DimensionError("add_power_jacobian: Jacobian shape mismatch");
  }
  if (use_parallel(*this)) {
    kernels::power_jacobian_parallel(*this, x.data(), scale, jac);
  } else {
    kernels::power_jacobian_serial(*this, x.data(), scale, jac);
  }
}

void MatricizedTensor::add_power_jacobian(const Vector& x, double scale, std::vector<Triplet>& out,
                                          Index col_offset) const {
  const int k = order();
  out.reserve(out.size() + nnz() * static_cast<std::size_t>(k));
  for (Index r = 0; r < out_dim_; ++r) {
    for (std::size_t e = row_ptr_[static_cast<std::size_t>(r)];
         e < row_ptr_[static_cast<std::size_t>(r) + 1]; ++e) {
      const std::int32_t* s = sub_.data() + e * static_cast<std::size_t>(k);
      for (int p = 0; p < k; ++p) {
        double d = scale * values_[e];
        for (int q = 0; q < k; ++q) {
          if (q != p) d *= x[s[q]];
        }
        out.emplace_back(r, col_offset + s[p], d);
      }
    }
  }
}

MatricizedTensor MatricizedTensor::scaled(double factor) const {
  if (factor == 0.0) return MatricizedTensor(out_dim_, in_dims_);
  MatricizedTensor t = *this;
  for (double& v : t.values_) v *= factor;
  return t;
}

Matrix MatricizedTensor::to_dense(std::uint64_t max_entries) const {
  const auto total = static_cast<std::uint64_t>(out_dim_) * flat_size_;
  if (flat_size_ != 0 && total / flat_size_ != static_cast<std::uint64_t>(out_dim_)) {
    throw BudgetError("to_dense: dense size overflows");
  }
  if (total > max_entries) {
    throw BudgetError("to_dense: dense matricization has " + std::to_string(total) +
                      " entries, above limit " + std::to_string(max_entries));
  }
  Matrix dense = Matrix::Zero(out_dim_, static_cast<Index>(flat_size_));
  for (Index r = 0; r < out_dim_; ++r) {
    for (std::size_t e = row_ptr_[static_cast<std::size_t>(r)];
         e < row_ptr_[static_cast<std::size_t>(r) + 1]; ++e) {
      dense(r, static_cast<Index>(flat_of(e))) += values_[e];
    }
  }
  return dense;
}

bool operator==(const MatricizedTensor& a, const MatricizedTensor& b) {
  return a.out_dim_ == b.out_dim_ && a.in_dims_ == b.in_dims_ && a.row_ptr_ == b.row_ptr_ &&
         a.sub_ == b.sub_ && a.values_ == b.values_;
}

TensorBuilder::TensorBuilder(Index out_dim, std::vector<Index> in_dims)
    : shape_(out_dim, std::move(in_dims)) {}

void TensorBuilder::add(Index row, std::initializer_list<Index> sub, double value) {
  add(row, std::span<const Index>(sub.begin(), sub.size()), value);
}

void TensorBuilder::add(Index row, std::span<const Index> sub, double value) {
  if (value == 0.0) return;
  entries_.push_back({row, shape_.flat_index(sub), value});
}

void TensorBuilder::add_flat(Index row, std::uint64_t flat, double value) {
  if (value == 0.0) return;
  entries_.push_back({row, flat, value});
}

MatricizedTensor TensorBuilder::build() && {
  return MatricizedTensor::from_entries(shape_.out_dim(), shape_.in_dims(), std::move(entries_));
}

Vector apply_matricized(const MatricizedTensor& g, std::span<const Vector> xs) {
  return g.apply(xs);
}

namespace kernels {

void contract_serial(const MatricizedTensor& g, std::span<const double* const> factors,
                     double scale, double* out) {
  dispatch_contract(g, factors, scale, out, false);
}

void contract_parallel(const MatricizedTensor& g, std::span<const double* const> factors,
                       double scale, double* out) {
  dispatch_contract(g, factors, scale, out, true);
}

void power_jacobian_serial(const MatricizedTensor& g, const double* x, double scale, Matrix& jac) {
  for (Index r = 0; r < g.out_dim(); ++r) jacobian_row(g, r, x, scale, jac);
}

void power_jacobian_parallel(const MatricizedTensor& g, const double* x, double scale,
                             Matrix& jac) {
  const Index rows = g.out_dim();
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows; ++r) jacobian_row(g, r, x, scale, jac);
}

}  // namespace kernels

}  // namespace liftrom
