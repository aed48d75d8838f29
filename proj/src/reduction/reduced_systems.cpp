#include "liftrom/reduction/reduced_systems.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>

namespace liftrom {

namespace {

void check_layout(const Layout& sys_layout, const ProjectionBasis& v, const char* who) {
  if (!sys_layout.empty() && !(sys_layout == v.full_layout())) {
    throw DimensionError(std::string(who) + ": basis layout does not match the system layout");
  }
}

bool is_identity(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return false;
  return (m - sparse_identity(m.rows())).norm() == 0.0;
}

Layout concat_layouts(const Layout& a, const Layout& b) {
  std::vector<VariableBlock> vbs = a.blocks();
  for (auto vb : b.blocks()) {
    vb.offset += a.total();
    vbs.push_back(vb);
  }
  return Layout(vbs);
}

}  // namespace

PolynomialSystem project_polynomial(const PolynomialSystem& sys, const ProjectionBasis& v) {
  sys.validate();
  check_layout(sys.layout, v, "project_polynomial");
  PolynomialSystem r;
  if (sys.E.size() != 0) r.E = v.project(sys.E);
  r.A = v.project(sys.A);
  r.B = v.restrict_rows(sys.B);
  for (const auto& t : sys.tensors) r.tensors.push_back(project_tensor(t, v, v));
  for (const auto& [ch, op] : sys.bilinear) r.bilinear.push_back({ch, v.project(op)});
  for (const auto& [ch, t] : sys.input_tensors) {
    r.input_tensors.push_back({ch, project_tensor(t, v, v)});
  }
  r.layout = v.reduced_layout();
  r.validate();
  return r;
}

QBSystem project_qb(const QBSystem& sys, const ProjectionBasis& v) {
  sys.validate();
  check_layout(sys.layout, v, "project_qb");
  QBSystem r;
  if (sys.E.size() != 0) r.E = v.project(sys.E);
  r.A = v.project(sys.A);
  r.B = v.restrict_rows(sys.B);
  r.H = project_tensor(sys.H, v, v);
  for (const auto& n : sys.N) r.N.push_back(v.project(n));
  r.layout = v.reduced_layout();
  r.validate();
  return r;
}

ReducedQuartic project_quartic(const QuarticSystem& sys, const ProjectionBasis& v,
                               const QuarticProjectionOptions& opts) {
  sys.validate();
  check_layout(sys.layout, v, "project_quartic");
  if (v.full_dim() != sys.dim()) throw DimensionError("project_quartic: basis dimension mismatch");
  if (v.reduced_dim() > opts.max_rank && !opts.allow_large) {
    throw BudgetError("project_quartic: reduced dimension " + std::to_string(v.reduced_dim()) +
                      " exceeds " + std::to_string(opts.max_rank) +
                      "; the order-4 tensor would have r^5 entries (set allow_large to override)");
  }
  ReducedQuartic r;
  r.A = v.project(sys.A);
  r.B = v.restrict_rows(sys.B);
  r.G2 = project_tensor(sys.G2, v, v);
  r.G3 = project_tensor(sys.G3, v, v);
  r.G4 = project_tensor(sys.G4, v, v);
  for (const auto& n : sys.N1) r.N1.push_back(v.project(n));
  for (const auto& t : sys.N2) r.N2.push_back(project_tensor(t, v, v));
  r.layout = v.reduced_layout();
  r.validate();
  return r;
}

std::pair<Layout, Layout> split_layout(const Layout& layout, Index n1) {
  std::vector<VariableBlock> a, b;
  for (const auto& vb : layout.blocks()) {
    if (vb.offset + vb.size <= n1) {
      a.push_back(vb);
    } else if (vb.offset >= n1) {
      b.push_back({vb.name, vb.offset - n1, vb.size});
    } else {
      throw DimensionError("split_layout: variable '" + vb.name + "' straddles the partition");
    }
  }
  return {Layout(a), Layout(b)};
}

QBSystem ReducedQBDAE::assembled() const { return QBSystem::from_blocks(blocks, layout); }

Layout ReducedQBDAE::x1_layout() const { return split_layout(layout, blocks.n1).first; }

ReducedQBDAE project_qbdae(const QBSystem& sys, const ProjectionBasis& v1,
                           const ProjectionBasis& v2) {
  sys.validate();
  if (!sys.blocks) throw DimensionError("project_qbdae: system has no x1/x2 partition");
  const QBBlocks& b = *sys.blocks;
  if (v1.full_dim() != b.n1 || v2.full_dim() != b.n2) {
    throw DimensionError("project_qbdae: bases cover " + std::to_string(v1.full_dim()) + " + " +
                         std::to_string(v2.full_dim()) + " states, partition is " +
                         std::to_string(b.n1) + " + " + std::to_string(b.n2));
  }
  if (!sys.layout.empty()) {
    const auto [l1, l2] = split_layout(sys.layout, b.n1);
    if (!(l1 == v1.full_layout()) || !(l2 == v2.full_layout())) {
      throw DimensionError("project_qbdae: basis layouts do not match the system layout");
    }
  }
  const ProjectionBasis v = ProjectionBasis::concat(v1, v2);

  ReducedQBDAE r;
  QBBlocks& rb = r.blocks;
  rb.n1 = v1.reduced_dim();
  rb.n2 = v2.reduced_dim();
  rb.E11 = v1.project(b.E11);
  rb.A11 = v1.project(b.A11);
  rb.A12 = v1.project(b.A12, v2);
  rb.B1 = v1.restrict_rows(b.B1);
  rb.H1 = project_tensor(b.H1, v1, v);
  rb.H2 = project_tensor(b.H2, v2, v1);
  for (const auto& m : b.N11) rb.N11.push_back(v1.project(m));
  for (const auto& m : b.N12) rb.N12.push_back(v1.project(m, v2));
  rb.validate();
  r.layout = concat_layouts(v1.reduced_layout(), v2.reduced_layout());
  return r;
}

std::uint64_t SubstitutedForm::ht1_columns() const {
  const auto r1 = static_cast<std::uint64_t>(Ht2.out_dim());
  return r1 * r1 + r1 * r1 * r1 + r1 * r1 * r1 * r1;
}

std::size_t SubstitutedForm::nnz() const {
  std::size_t n = A12H2.nnz() + Ht2.nnz() + Ht3.nnz() + Ht4.nnz();
  for (const auto& t : N12H2) n += t.nnz();
  return n;
}

namespace {

struct RowView {
  const MatricizedTensor& t;
  std::size_t begin(Index r) const { return t.row_ptr()[static_cast<std::size_t>(r)]; }
  std::size_t end(Index r) const { return t.row_ptr()[static_cast<std::size_t>(r) + 1]; }
  std::size_t count(Index r) const { return end(r) - begin(r); }
  Index sub(std::size_t e, int q) const {
    return t.sub_indices()[e * static_cast<std::size_t>(t.order()) + static_cast<std::size_t>(q)];
  }
  double value(std::size_t e) const { return t.values()[e]; }
};

// (A H2) as an order-2 tensor for an r1 x r2 matrix A.
MatricizedTensor times_h2(const SparseMatrix& a, const MatricizedTensor& h2, Index r1) {
  const RowView h{h2};
  TensorBuilder tb(r1, {r1, r1});
  for (Index p = 0; p < a.outerSize(); ++p) {
    for (SparseMatrix::InnerIterator it(a, p); it; ++it) {
      for (std::size_t e = h.begin(p); e < h.end(p); ++e) {
        tb.add(it.row(), {h.sub(e, 0), h.sub(e, 1)}, it.value() * h.value(e));
      }
    }
  }
  return std::move(tb).build();
}

std::uint64_t times_h2_estimate(const SparseMatrix& a, const MatricizedTensor& h2) {
  const RowView h{h2};
  std::uint64_t n = 0;
  for (Index p = 0; p < a.outerSize(); ++p) {
    for (SparseMatrix::InnerIterator it(a, p); it; ++it) n += h.count(p);
  }
  return n;
}

}  // namespace

std::uint64_t substituted_nnz_estimate(const QBBlocks& b) {
  const RowView h1{b.H1}, h2{b.H2};
  const Index r1 = b.n1;
  std::uint64_t n = times_h2_estimate(b.A12, b.H2);
  for (const auto& m : b.N12) n += times_h2_estimate(m, b.H2);
  for (std::size_t e = 0; e < b.H1.nnz(); ++e) {
    const Index i = h1.sub(e, 0), j = h1.sub(e, 1);
    const std::uint64_t ci = i < r1 ? 1 : h2.count(i - r1);
    const std::uint64_t cj = j < r1 ? 1 : h2.count(j - r1);
    n += ci * cj;
  }
  return n;
}

ReducedQBDAE precompute_substituted_ode(ReducedQBDAE rom, const SubstitutionOptions& opts) {
  const QBBlocks& b = rom.blocks;
  b.validate();
  const Index r1 = b.n1;
  constexpr std::uint64_t kBytesPerEntry = 48;
  const std::uint64_t estimate = substituted_nnz_estimate(b);
  if (estimate > opts.max_bytes / kBytesPerEntry) {
    throw BudgetError("precompute_substituted_ode: about " + std::to_string(estimate) +
                      " nonzeros (" + std::to_string(estimate * kBytesPerEntry) +
                      " bytes) exceed the budget of " + std::to_string(opts.max_bytes) + " bytes");
  }

  SubstitutedForm s;
  s.A12H2 = times_h2(b.A12, b.H2, r1);
  for (const auto& m : b.N12) s.N12H2.push_back(times_h2(m, b.H2, r1));

  const RowView h1{b.H1}, h2{b.H2};
  TensorBuilder t2(r1, {r1, r1}), t3(r1, {r1, r1, r1}), t4(r1, {r1, r1, r1, r1});
  for (Index row = 0; row < r1; ++row) {
    for (std::size_t e = h1.begin(row); e < h1.end(row); ++e) {
      const Index i = h1.sub(e, 0), j = h1.sub(e, 1);
      const double val = h1.value(e);
      if (i < r1 && j < r1) {
        t2.add(row, {i, j}, val);
      } else if (i < r1) {
        const Index p = j - r1;
        for (std::size_t f = h2.begin(p); f < h2.end(p); ++f) {
          t3.add(row, {i, h2.sub(f, 0), h2.sub(f, 1)}, val * h2.value(f));
        }
      } else if (j < r1) {
        const Index p = i - r1;
        for (std::size_t f = h2.begin(p); f < h2.end(p); ++f) {
          t3.add(row, {h2.sub(f, 0), h2.sub(f, 1), j}, val * h2.value(f));
        }
      } else {
        const Index p = i - r1, q = j - r1;
        for (std::size_t f = h2.begin(p); f < h2.end(p); ++f) {
          const double vf = val * h2.value(f);
          for (std::size_t g = h2.begin(q); g < h2.end(q); ++g) {
            t4.add(row, {h2.sub(f, 0), h2.sub(f, 1), h2.sub(g, 0), h2.sub(g, 1)},
                   vf * h2.value(g));
          }
        }
      }
    }
  }
  s.Ht2 = std::move(t2).build();
  s.Ht3 = std::move(t3).build();
  s.Ht4 = std::move(t4).build();
  rom.substituted = std::move(s);
  return rom;
}

PolynomialSystem ReducedQBDAE::substituted_system() const {
  if (!substituted) {
    throw Error("ReducedQBDAE: substituted form not computed (call precompute_substituted_ode)");
  }
  const SubstitutedForm& s = *substituted;
  PolynomialSystem p;
  if (!is_identity(blocks.E11)) p.E = blocks.E11;
  p.A = blocks.A11;
  p.B = blocks.B1;
  for (const auto* t : {&s.A12H2, &s.Ht2, &s.Ht3, &s.Ht4}) {
    if (!t->empty()) p.tensors.push_back(*t);
  }
  for (Index k = 0; k < blocks.inputs(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (blocks.N11[kk].nonZeros() > 0) p.bilinear.push_back({k, blocks.N11[kk]});
    if (!s.N12H2[kk].empty()) p.input_tensors.push_back({k, s.N12H2[kk]});
  }
  p.layout = x1_layout();
  p.validate();
  return p;
}

namespace {

Index tensor_max_dim(const MatricizedTensor& t) {
  Index m = t.out_dim();
  for (Index d : t.in_dims()) m = std::max(m, d);
  return m;
}

Index matrix_max_dim(const SparseMatrix& m) { return std::max(m.rows(), m.cols()); }

}  // namespace

Index max_operator_dimension(const PolynomialSystem& sys) {
  Index m = std::max({matrix_max_dim(sys.E), matrix_max_dim(sys.A), sys.B.rows()});
  for (const auto& t : sys.tensors) m = std::max(m, tensor_max_dim(t));
  for (const auto& b : sys.bilinear) m = std::max(m, matrix_max_dim(b.op));
  for (const auto& t : sys.input_tensors) m = std::max(m, tensor_max_dim(t.op));
  return m;
}

Index max_operator_dimension(const QBBlocks& b) {
  Index m = std::max({matrix_max_dim(b.E11), matrix_max_dim(b.A11), matrix_max_dim(b.A12),
                      b.B1.rows(), tensor_max_dim(b.H1), tensor_max_dim(b.H2)});
  for (const auto& x : b.N11) m = std::max(m, matrix_max_dim(x));
  for (const auto& x : b.N12) m = std::max(m, matrix_max_dim(x));
  return m;
}

}  // namespace liftrom
