#include "liftrom/reduction/projection.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace liftrom {

ProjectionBasis::ProjectionBasis(const Layout& full, const PODBasis& pod,
                                 const std::vector<std::string>& identity_vars) {
  full_layout_ = full;
  for (const auto& pb : pod.blocks) {
    if (!full.contains(pb.name)) {
      throw DimensionError("ProjectionBasis: basis variable '" + pb.name +
                           "' is not in the state layout");
    }
  }
  for (const auto& vb : full.blocks()) {
    Block b;
    b.name = vb.name;
    b.full_offset = vb.offset;
    b.full_size = vb.size;
    const bool ident =
        std::find(identity_vars.begin(), identity_vars.end(), vb.name) != identity_vars.end();
    const PODBlock* pb = nullptr;
    for (const auto& cand : pod.blocks) {
      if (cand.name == vb.name) pb = &cand;
    }
    if (ident && pb) {
      throw DimensionError("ProjectionBasis: variable '" + vb.name +
                           "' has both a basis and an identity block");
    }
    if (ident) {
      b.identity = true;
      b.red_size = vb.size;
    } else if (pb) {
      if (pb->basis.rows() != vb.size) {
        throw DimensionError("ProjectionBasis: basis for '" + vb.name + "' has " +
                             std::to_string(pb->basis.rows()) + " rows, layout block has " +
                             std::to_string(vb.size));
      }
      b.v = pb->basis;
      b.vt = pb->basis.transpose();
      b.red_size = pb->basis.cols();
    } else {
      throw DimensionError("ProjectionBasis: no basis for variable '" + vb.name + "'");
    }
    blocks_.push_back(std::move(b));
  }
  finalize();
}

ProjectionBasis ProjectionBasis::identity(const Layout& full) {
  return ProjectionBasis(full, PODBasis{}, full.names());
}

ProjectionBasis ProjectionBasis::concat(const ProjectionBasis& a, const ProjectionBasis& b) {
  ProjectionBasis out;
  std::vector<VariableBlock> vbs = a.full_layout_.blocks();
  for (auto vb : b.full_layout_.blocks()) {
    vb.offset += a.full_dim_;
    vbs.push_back(vb);
  }
  out.full_layout_ = Layout(vbs);
  out.blocks_ = a.blocks_;
  for (Block blk : b.blocks_) {
    blk.full_offset += a.full_dim_;
    out.blocks_.push_back(std::move(blk));
  }
  out.finalize();
  return out;
}

void ProjectionBasis::finalize() {
  full_dim_ = full_layout_.total();
  reduced_dim_ = 0;
  std::vector<std::string> names;
  std::vector<Index> sizes;
  block_of_.assign(static_cast<std::size_t>(full_dim_), -1);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    auto& b = blocks_[k];
    b.red_offset = reduced_dim_;
    reduced_dim_ += b.red_size;
    names.push_back(b.name);
    sizes.push_back(b.red_size);
    for (Index i = 0; i < b.full_size; ++i) {
      block_of_[static_cast<std::size_t>(b.full_offset + i)] = static_cast<int>(k);
    }
  }
  reduced_layout_ = Layout::sized(names, sizes);
}

Matrix ProjectionBasis::dense() const {
  Matrix v = Matrix::Zero(full_dim_, reduced_dim_);
  for (const auto& b : blocks_) {
    if (b.identity) {
      v.block(b.full_offset, b.red_offset, b.full_size, b.red_size).setIdentity();
    } else {
      v.block(b.full_offset, b.red_offset, b.full_size, b.red_size) = b.v;
    }
  }
  return v;
}

Vector ProjectionBasis::lift(const Vector& xr) const {
  if (xr.size() != reduced_dim_) throw DimensionError("ProjectionBasis::lift: size mismatch");
  Vector x(full_dim_);
  for (const auto& b : blocks_) {
    if (b.identity) {
      x.segment(b.full_offset, b.full_size) = xr.segment(b.red_offset, b.red_size);
    } else {
      x.segment(b.full_offset, b.full_size).noalias() = b.v * xr.segment(b.red_offset, b.red_size);
    }
  }
  return x;
}

Matrix ProjectionBasis::lift(const Matrix& xr) const {
  if (xr.rows() != reduced_dim_) throw DimensionError("ProjectionBasis::lift: size mismatch");
  Matrix x(full_dim_, xr.cols());
  for (const auto& b : blocks_) {
    if (b.identity) {
      x.middleRows(b.full_offset, b.full_size) = xr.middleRows(b.red_offset, b.red_size);
    } else {
      x.middleRows(b.full_offset, b.full_size).noalias() =
          b.v * xr.middleRows(b.red_offset, b.red_size);
    }
  }
  return x;
}

Vector ProjectionBasis::restrict(const Vector& x) const {
  return restrict_rows(Matrix(x)).col(0);
}

Matrix ProjectionBasis::restrict_rows(const Matrix& m) const {
  if (m.rows() != full_dim_) {
    throw DimensionError("ProjectionBasis::restrict_rows: expected " + std::to_string(full_dim_) +
                         " rows, got " + std::to_string(m.rows()));
  }
  Matrix out(reduced_dim_, m.cols());
  for (const auto& b : blocks_) {
    if (b.identity) {
      out.middleRows(b.red_offset, b.red_size) = m.middleRows(b.full_offset, b.full_size);
    } else {
      out.middleRows(b.red_offset, b.red_size).noalias() =
          b.vt * m.middleRows(b.full_offset, b.full_size);
    }
  }
  return out;
}

namespace {

SparseMatrix sparse_basis(const ProjectionBasis& p) {
  std::vector<Triplet> trips;
  for (const auto& b : p.blocks()) {
    if (b.identity) {
      for (Index i = 0; i < b.full_size; ++i) {
        trips.emplace_back(b.full_offset + i, b.red_offset + i, 1.0);
      }
    } else {
      for (Index j = 0; j < b.red_size; ++j) {
        for (Index i = 0; i < b.full_size; ++i) {
          trips.emplace_back(b.full_offset + i, b.red_offset + j, b.v(i, j));
        }
      }
    }
  }
  SparseMatrix v(p.full_dim(), p.reduced_dim());
  v.setFromTriplets(trips.begin(), trips.end());
  return v;
}

}  // namespace

SparseMatrix ProjectionBasis::project(const SparseMatrix& a, const ProjectionBasis& w) const {
  if (a.rows() != full_dim_ || a.cols() != w.full_dim()) {
    throw DimensionError("ProjectionBasis::project: operator is " + std::to_string(a.rows()) +
                         " x " + std::to_string(a.cols()) + ", bases expect " +
                         std::to_string(full_dim_) + " x " + std::to_string(w.full_dim()));
  }
  const SparseMatrix vt = SparseMatrix(sparse_basis(*this).transpose());
  SparseMatrix out = vt * (a * sparse_basis(w));
  out.prune(0.0, 0.0);
  out.makeCompressed();
  return out;
}

namespace {

struct Group {
  std::vector<int> signature;  // block per factor, output first
  std::vector<std::size_t> entries;
};

std::vector<Group> group_entries(const MatricizedTensor& g,
                                 std::span<const ProjectionBasis* const> bases) {
  const int k = g.order();
  std::map<std::vector<int>, std::vector<std::size_t>> groups;
  const auto rp = g.row_ptr();
  const auto sub = g.sub_indices();
  std::vector<int> sig(static_cast<std::size_t>(k + 1));
  for (Index r = 0; r < g.out_dim(); ++r) {
    for (std::size_t e = rp[static_cast<std::size_t>(r)]; e < rp[static_cast<std::size_t>(r) + 1];
         ++e) {
      sig[0] = bases[0]->block_of(r);
      for (int q = 0; q < k; ++q) {
        sig[static_cast<std::size_t>(q) + 1] =
            bases[static_cast<std::size_t>(q) + 1]->block_of(sub[e * static_cast<std::size_t>(k) + static_cast<std::size_t>(q)]);
      }
      groups[sig].push_back(e);
    }
  }
  std::vector<Group> out;
  out.reserve(groups.size());
  for (auto& [s, es] : groups) out.push_back({s, std::move(es)});
  return out;
}

std::vector<TensorEntry> project_group(const MatricizedTensor& g, const Group& grp,
                                       std::span<const ProjectionBasis* const> bases,
                                       const MatricizedTensor& shape) {
  const int nf = g.order() + 1;
  std::vector<const ProjectionBasis::Block*> blk(static_cast<std::size_t>(nf));
  std::vector<int> dense_factors, ident_factors;
  std::size_t acc_size = 1;
  for (int q = 0; q < nf; ++q) {
    const auto qq = static_cast<std::size_t>(q);
    blk[qq] = &bases[qq]->blocks()[static_cast<std::size_t>(grp.signature[qq])];
    if (blk[qq]->identity) {
      ident_factors.push_back(q);
    } else {
      dense_factors.push_back(q);
      const auto rs = static_cast<std::size_t>(blk[qq]->red_size);
      if (rs != 0 && acc_size > std::numeric_limits<std::uint32_t>::max() / rs) {
        throw BudgetError("project_tensor: reduced block exceeds 2^32 entries");
      }
      acc_size *= rs;
    }
  }
  std::vector<TensorEntry> out;
  if (acc_size == 0) return out;

  const auto rp = g.row_ptr();
  const auto sub = g.sub_indices();
  const auto vals = g.values();
  const auto k = static_cast<std::size_t>(g.order());
  std::map<std::vector<Index>, std::vector<double>> accs;
  std::vector<Index> full_idx(static_cast<std::size_t>(nf));
  std::vector<Index> key(ident_factors.size());
  std::vector<double> w, next;
  w.reserve(acc_size);
  next.reserve(acc_size);
  for (std::size_t e : grp.entries) {
    const auto row_it = std::upper_bound(rp.begin(), rp.end(), e);
    full_idx[0] = static_cast<Index>(row_it - rp.begin()) - 1;
    for (std::size_t q = 0; q < k; ++q) full_idx[q + 1] = sub[e * k + q];
    for (std::size_t i = 0; i < ident_factors.size(); ++i) {
      const auto q = static_cast<std::size_t>(ident_factors[i]);
      key[i] = full_idx[q] - blk[q]->full_offset;
    }
    w.assign(1, vals[e]);
    for (int qi : dense_factors) {
      const auto q = static_cast<std::size_t>(qi);
      const Index local = full_idx[q] - blk[q]->full_offset;
      const double* row = blk[q]->vt.col(local).data();
      const Index rs = blk[q]->red_size;
      next.resize(w.size() * static_cast<std::size_t>(rs));
      std::size_t o = 0;
      for (double a : w) {
        for (Index j = 0; j < rs; ++j) next[o++] = a * row[j];
      }
      std::swap(w, next);
    }
    auto& acc = accs[key];
    if (acc.empty()) acc.assign(acc_size, 0.0);
    for (std::size_t i = 0; i < acc_size; ++i) acc[i] += w[i];
  }

  std::vector<Index> red(static_cast<std::size_t>(nf));
  std::vector<Index> in_sub(k);
  for (const auto& [kk, acc] : accs) {
    for (std::size_t i = 0; i < ident_factors.size(); ++i) {
      const auto q = static_cast<std::size_t>(ident_factors[i]);
      red[q] = blk[q]->red_offset + kk[i];
    }
    for (std::size_t idx = 0; idx < acc_size; ++idx) {
      if (acc[idx] == 0.0) continue;
      std::size_t rem = idx;
      for (auto it = dense_factors.rbegin(); it != dense_factors.rend(); ++it) {
        const auto q = static_cast<std::size_t>(*it);
        const auto rs = static_cast<std::size_t>(blk[q]->red_size);
        red[q] = blk[q]->red_offset + static_cast<Index>(rem % rs);
        rem /= rs;
      }
      for (std::size_t q = 0; q < k; ++q) in_sub[q] = red[q + 1];
      out.push_back({red[0], shape.flat_index(in_sub), acc[idx]});
    }
  }
  return out;
}

void check_bases(const MatricizedTensor& g, std::span<const ProjectionBasis* const> all) {
  if (all[0]->full_dim() != g.out_dim()) {
    throw DimensionError("project_tensor: output basis has " + std::to_string(all[0]->full_dim()) +
                         " rows, tensor has " + std::to_string(g.out_dim()));
  }
  for (int q = 0; q < g.order(); ++q) {
    const auto qq = static_cast<std::size_t>(q);
    if (all[qq + 1]->full_dim() != g.in_dims()[qq]) {
      throw DimensionError("project_tensor: basis for factor " + std::to_string(q) + " has " +
                           std::to_string(all[qq + 1]->full_dim()) + " rows, tensor expects " +
                           std::to_string(g.in_dims()[qq]));
    }
  }
}

MatricizedTensor project_impl(const MatricizedTensor& g, const ProjectionBasis& out,
                              std::span<const ProjectionBasis* const> in, bool parallel) {
  if (static_cast<int>(in.size()) != g.order()) {
    throw DimensionError("project_tensor: " + std::to_string(in.size()) +
                         " input bases for an order-" + std::to_string(g.order()) + " tensor");
  }
  std::vector<const ProjectionBasis*> all{&out};
  all.insert(all.end(), in.begin(), in.end());
  check_bases(g, all);
  std::vector<Index> red_dims;
  for (const auto* b : in) red_dims.push_back(b->reduced_dim());
  const MatricizedTensor shape(out.reduced_dim(), red_dims);

  const std::vector<Group> groups = group_entries(g, all);
  std::vector<std::vector<TensorEntry>> parts(groups.size());
  const auto ng = static_cast<std::ptrdiff_t>(groups.size());
  if (parallel) {
    bool failed = false;
    std::string message;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < ng; ++i) {
      try {
        parts[static_cast<std::size_t>(i)] =
            project_group(g, groups[static_cast<std::size_t>(i)], all, shape);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          message = e.what();
        }
      }
    }
    if (failed) throw BudgetError(message);
  } else {
    for (std::ptrdiff_t i = 0; i < ng; ++i) {
      parts[static_cast<std::size_t>(i)] =
          project_group(g, groups[static_cast<std::size_t>(i)], all, shape);
    }
  }
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<TensorEntry> entries;
  entries.reserve(total);
  for (auto& p : parts) entries.insert(entries.end(), p.begin(), p.end());
  return MatricizedTensor::from_entries(out.reduced_dim(), red_dims, std::move(entries));
}

}  // namespace

namespace kernels {

MatricizedTensor project_tensor_serial(const MatricizedTensor& g, const ProjectionBasis& out,
                                       std::span<const ProjectionBasis* const> in) {
  return project_impl(g, out, in, false);
}

MatricizedTensor project_tensor_parallel(const MatricizedTensor& g, const ProjectionBasis& out,
                                         std::span<const ProjectionBasis* const> in) {
  return project_impl(g, out, in, true);
}

}  // namespace kernels

MatricizedTensor project_tensor(const MatricizedTensor& g, const ProjectionBasis& out,
                                std::span<const ProjectionBasis* const> in) {
  return kernels::project_tensor_parallel(g, out, in);
}

MatricizedTensor project_tensor(const MatricizedTensor& g, const ProjectionBasis& out,
                                const ProjectionBasis& in) {
  const std::vector<const ProjectionBasis*> ins(static_cast<std::size_t>(g.order()), &in);
  return project_tensor(g, out, ins);
}

}  // namespace liftrom
