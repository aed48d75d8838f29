#include "liftrom/dynamics/systems.hpp"

#include "liftrom/errors.hpp"

namespace liftrom {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw DimensionError(msg);
}

bool tensor_shape(const MatricizedTensor& t, Index out, std::vector<Index> dims) {
  return t.out_dim() == out && t.in_dims() == dims;
}

void append_shifted(const SparseMatrix& a, Index r0, Index c0, std::vector<Triplet>& out) {
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
    }
  }
}

}  // namespace

SparseMatrix sparse_identity(Index n, double scale) {
  SparseMatrix m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Index i = 0; i < n; ++i) m.insert(i, i) = scale;
  m.makeCompressed();
  return m;
}

SparseMatrix block_diag(const std::vector<SparseMatrix>& blocks) {
  Index rows = 0, cols = 0;
  std::vector<Triplet> trips;
  for (const auto& b : blocks) {
    append_shifted(b, rows, cols, trips);
    rows += b.rows();
    cols += b.cols();
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

void QuarticSystem::validate() const {
  const Index n = dim();
  require(A.cols() == n, "QuarticSystem: A must be square");
  require(B.rows() == n, "QuarticSystem: B must have n rows");
  require(tensor_shape(G2, n, {n, n}), "QuarticSystem: G2 must be n x n^2");
  require(tensor_shape(G3, n, {n, n, n}), "QuarticSystem: G3 must be n x n^3");
  require(tensor_shape(G4, n, {n, n, n, n}), "QuarticSystem: G4 must be n x n^4");
  require(static_cast<Index>(N1.size()) == inputs() && static_cast<Index>(N2.size()) == inputs(),
          "QuarticSystem: need one N1 and one N2 per input channel");
  for (const auto& m : N1) require(m.rows() == n && m.cols() == n, "QuarticSystem: N1 must be n x n");
  for (const auto& t : N2) require(tensor_shape(t, n, {n, n}), "QuarticSystem: N2 must be n x n^2");
  require(layout.empty() || layout.total() == n, "QuarticSystem: layout mismatch");
}

PolynomialSystem QuarticSystem::to_polynomial() const {
  validate();
  PolynomialSystem p;
  p.A = A;
  p.B = B;
  for (const auto* g : {&G2, &G3, &G4}) {
    if (!g->empty()) p.tensors.push_back(*g);
  }
  for (Index k = 0; k < inputs(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (N1[kk].nonZeros() > 0) p.bilinear.push_back({k, N1[kk]});
    if (!N2[kk].empty()) p.input_tensors.push_back({k, N2[kk]});
  }
  p.layout = layout;
  return p;
}

void QBBlocks::validate() const {
  const Index n = n1 + n2;
  require(n1 >= 0 && n2 >= 0, "QBBlocks: negative partition");
  require(E11.rows() == n1 && E11.cols() == n1, "QBBlocks: E11 must be n1 x n1");
  require(A11.rows() == n1 && A11.cols() == n1, "QBBlocks: A11 must be n1 x n1");
  require(A12.rows() == n1 && A12.cols() == n2, "QBBlocks: A12 must be n1 x n2");
  require(B1.rows() == n1, "QBBlocks: B1 must have n1 rows");
  require(tensor_shape(H1, n1, {n, n}), "QBBlocks: H1 must be n1 x n^2");
  require(tensor_shape(H2, n2, {n1, n1}), "QBBlocks: H2 must be n2 x n1^2");
  require(static_cast<Index>(N11.size()) == inputs() && static_cast<Index>(N12.size()) == inputs(),
          "QBBlocks: need one N11 and one N12 per input channel");
  for (const auto& m : N11) require(m.rows() == n1 && m.cols() == n1, "QBBlocks: N11 must be n1 x n1");
  for (const auto& m : N12) require(m.rows() == n1 && m.cols() == n2, "QBBlocks: N12 must be n1 x n2");
}

void QBSystem::validate() const {
  const Index n = dim();
  require(A.cols() == n, "QBSystem: A must be square");
  require(E.size() == 0 || (E.rows() == n && E.cols() == n), "QBSystem: E must be n x n");
  require(B.rows() == n, "QBSystem: B must have n rows");
  require(tensor_shape(H, n, {n, n}), "QBSystem: H must be n x n^2");
  require(static_cast<Index>(N.size()) == inputs(), "QBSystem: need one N per input channel");
  for (const auto& m : N) require(m.rows() == n && m.cols() == n, "QBSystem: N must be n x n");
  require(layout.empty() || layout.total() == n, "QBSystem: layout mismatch");
  if (blocks) {
    blocks->validate();
    require(blocks->n1 + blocks->n2 == n, "QBSystem: partition does not cover the state");
  }
}

PolynomialSystem QBSystem::to_polynomial() const {
  validate();
  PolynomialSystem p;
  p.E = E;
  p.A = A;
  p.B = B;
  if (!H.empty()) p.tensors.push_back(H);
  for (Index k = 0; k < inputs(); ++k) {
    const auto& nk = N[static_cast<std::size_t>(k)];
    if (nk.nonZeros() > 0) p.bilinear.push_back({k, nk});
  }
  p.layout = layout;
  return p;
}

QBSystem QBSystem::from_blocks(QBBlocks b, Layout layout) {
  b.validate();
  const Index n1 = b.n1, n2 = b.n2, n = n1 + n2;
  QBSystem s;
  s.E = block_diag({b.E11, SparseMatrix(n2, n2)});

  std::vector<Triplet> trips;
  append_shifted(b.A11, 0, 0, trips);
  append_shifted(b.A12, 0, n1, trips);
  append_shifted(sparse_identity(n2), n1, n1, trips);
  s.A.resize(n, n);
  s.A.setFromTriplets(trips.begin(), trips.end());

  s.B = Matrix::Zero(n, b.inputs());
  s.B.topRows(n1) = b.B1;

  std::vector<TensorEntry> h = b.H1.entries();
  // x1 (x) x1 sits inside x (x) x at flat = j1 * n + j2 for j1, j2 < n1.
  for (const auto& e : b.H2.entries()) {
    const std::uint64_t j1 = e.flat / static_cast<std::uint64_t>(n1);
    const std::uint64_t j2 = e.flat % static_cast<std::uint64_t>(n1);
    h.push_back({n1 + e.row, j1 * static_cast<std::uint64_t>(n) + j2, -e.value});
  }
  s.H = MatricizedTensor::from_entries(n, {n, n}, std::move(h));

  for (Index k = 0; k < b.inputs(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    trips.clear();
    append_shifted(b.N11[kk], 0, 0, trips);
    append_shifted(b.N12[kk], 0, n1, trips);
    SparseMatrix nk(n, n);
    nk.setFromTriplets(trips.begin(), trips.end());
    s.N.push_back(std::move(nk));
  }
  s.layout = std::move(layout);
  s.blocks = std::move(b);
  s.validate();
  return s;
}

Vector eval_rhs_quartic(const QuarticSystem& sys, const Vector& x, const Vector& u) {
  return eval_polynomial_rhs(sys.to_polynomial(), x, u);
}

Vector eval_rhs_qb(const QBSystem& sys, const Vector& x, const Vector& u) {
  return eval_polynomial_rhs(sys.to_polynomial(), x, u);
}

Vector algebraic_residual(const QBBlocks& b, const Vector& x) {
  if (x.size() != b.n1 + b.n2) throw DimensionError("algebraic_residual: state dimension mismatch");
  return x.tail(b.n2) - b.H2.apply_power(Vector(x.head(b.n1)));
}

}  // namespace liftrom
