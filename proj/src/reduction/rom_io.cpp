#include "liftrom/reduction/rom_io.hpp"

#include "liftrom/errors.hpp"
#include "liftrom/tensor/serialize.hpp"

namespace liftrom {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("serialized model is missing key '") + key + "'");
  }
  return j.at(key);
}

json optional_sparse(const SparseMatrix& m) { return m.size() ? sparse_to_json(m) : json(nullptr); }

SparseMatrix optional_sparse_from(const json& j) {
  return j.is_null() ? SparseMatrix() : sparse_from_json(j);
}

json sparse_list(const std::vector<SparseMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(sparse_to_json(m));
  return out;
}

std::vector<SparseMatrix> sparse_list_from(const json& j) {
  std::vector<SparseMatrix> out;
  for (const auto& e : j) out.push_back(sparse_from_json(e));
  return out;
}

json vector_json(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

Vector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

json layout_to_json(const Layout& l) {
  json out = json::array();
  for (const auto& b : l.blocks()) out.push_back({{"name", b.name}, {"size", b.size}});
  return out;
}

Layout layout_from_json(const json& j) {
  std::vector<std::string> names;
  std::vector<Index> sizes;
  for (const auto& b : j) {
    names.push_back(require(b, "name").get<std::string>());
    sizes.push_back(require(b, "size").get<Index>());
  }
  return Layout::sized(names, sizes);
}

json polynomial_to_json(const PolynomialSystem& s) {
  json tensors = json::array();
  for (const auto& t : s.tensors) tensors.push_back(tensor_to_json(t));
  json bilinear = json::array();
  for (const auto& b : s.bilinear) bilinear.push_back({{"channel", b.channel}, {"op", sparse_to_json(b.op)}});
  json input_tensors = json::array();
  for (const auto& b : s.input_tensors) {
    input_tensors.push_back({{"channel", b.channel}, {"op", tensor_to_json(b.op)}});
  }
  return {{"E", optional_sparse(s.E)},
          {"A", sparse_to_json(s.A)},
          {"B", matrix_to_json(s.B)},
          {"tensors", std::move(tensors)},
          {"bilinear", std::move(bilinear)},
          {"input_tensors", std::move(input_tensors)},
          {"layout", layout_to_json(s.layout)}};
}

PolynomialSystem polynomial_from_json(const json& j) {
  PolynomialSystem s;
  s.E = optional_sparse_from(require(j, "E"));
  s.A = sparse_from_json(require(j, "A"));
  s.B = matrix_from_json(require(j, "B"));
  for (const auto& t : require(j, "tensors")) s.tensors.push_back(tensor_from_json(t));
  for (const auto& b : require(j, "bilinear")) {
    s.bilinear.push_back({require(b, "channel").get<Index>(), sparse_from_json(require(b, "op"))});
  }
  for (const auto& b : require(j, "input_tensors")) {
    s.input_tensors.push_back({require(b, "channel").get<Index>(), tensor_from_json(require(b, "op"))});
  }
  s.layout = layout_from_json(require(j, "layout"));
  s.validate();
  return s;
}

json qb_blocks_to_json(const QBBlocks& b) {
  return {{"n1", b.n1},
          {"n2", b.n2},
          {"E11", sparse_to_json(b.E11)},
          {"A11", sparse_to_json(b.A11)},
          {"A12", sparse_to_json(b.A12)},
          {"B1", matrix_to_json(b.B1)},
          {"H1", tensor_to_json(b.H1)},
          {"H2", tensor_to_json(b.H2)},
          {"N11", sparse_list(b.N11)},
          {"N12", sparse_list(b.N12)}};
}

QBBlocks qb_blocks_from_json(const json& j) {
  QBBlocks b;
  b.n1 = require(j, "n1").get<Index>();
  b.n2 = require(j, "n2").get<Index>();
  b.E11 = sparse_from_json(require(j, "E11"));
  b.A11 = sparse_from_json(require(j, "A11"));
  b.A12 = sparse_from_json(require(j, "A12"));
  b.B1 = matrix_from_json(require(j, "B1"));
  b.H1 = tensor_from_json(require(j, "H1"));
  b.H2 = tensor_from_json(require(j, "H2"));
  b.N11 = sparse_list_from(require(j, "N11"));
  b.N12 = sparse_list_from(require(j, "N12"));
  b.validate();
  return b;
}

std::shared_ptr<const ComponentNonlinearity> nonlinearity_from_json(const json& j) {
  const auto kind = require(j, "kind").get<std::string>();
  const json& p = require(j, "params");
  if (kind == "cubic") {
    return std::make_shared<CubicNonlinearity>(require(p, "n").get<Index>(),
                                               require(p, "offset").get<Index>(),
                                               require(p, "a2").get<double>());
  }
  if (kind == "arrhenius") {
    return std::make_shared<ArrheniusNonlinearity>(
        require(p, "n").get<Index>(), require(p, "psi_offset").get<Index>(),
        require(p, "theta_offset").get<Index>(), require(p, "gamma").get<double>());
  }
  throw ConfigError("unknown nonlinearity kind '" + kind + "'");
}

json pod_deim_to_json(const PodDeimRom& rom) {
  return {{"E", optional_sparse(rom.E)},
          {"A", sparse_to_json(rom.A)},
          {"B", matrix_to_json(rom.B)},
          {"M", matrix_to_json(rom.M)},
          {"sampled_basis", matrix_to_json(rom.sampled_basis)},
          {"indices", rom.indices},
          {"nonlinearity", {{"kind", rom.g->kind()}, {"params", rom.g->params()}}},
          {"layout", layout_to_json(rom.layout)}};
}

PodDeimRom pod_deim_from_json(const json& j) {
  PodDeimRom rom;
  rom.E = optional_sparse_from(require(j, "E"));
  rom.A = sparse_from_json(require(j, "A"));
  rom.A_dense = Matrix(rom.A);
  rom.B = matrix_from_json(require(j, "B"));
  rom.M = matrix_from_json(require(j, "M"));
  rom.sampled_basis = matrix_from_json(require(j, "sampled_basis"));
  rom.indices = require(j, "indices").get<std::vector<Index>>();
  rom.g = nonlinearity_from_json(require(j, "nonlinearity"));
  rom.layout = layout_from_json(require(j, "layout"));
  const auto m = static_cast<Index>(rom.indices.size());
  if (rom.M.rows() != rom.dim() || rom.M.cols() != m ||
      rom.sampled_basis.rows() != m * rom.g->arity() || rom.sampled_basis.cols() != rom.dim()) {
    throw DimensionError("pod_deim_from_json: operator shapes are inconsistent");
  }
  for (Index i : rom.indices) {
    if (i < 0 || i >= rom.g->size()) throw DimensionError("pod_deim_from_json: index out of range");
  }
  return rom;
}

json pod_basis_to_json(const PODBasis& b) {
  json vars = json::array();
  for (const auto& blk : b.blocks) {
    std::vector<Index> modes = blk.modes;
    for (Index& m : modes) ++m;
    vars.push_back({{"name", blk.name},
                    {"modes", modes},
                    {"numerical_rank", blk.numerical_rank},
                    {"sigma", vector_json(blk.sigma)},
                    {"basis", matrix_to_json(blk.basis)}});
  }
  return {{"variables", std::move(vars)}};
}

PODBasis pod_basis_from_json(const json& j) {
  PODBasis b;
  for (const auto& v : require(j, "variables")) {
    PODBlock blk;
    blk.name = require(v, "name").get<std::string>();
    blk.modes = require(v, "modes").get<std::vector<Index>>();
    for (Index& m : blk.modes) --m;
    blk.numerical_rank = require(v, "numerical_rank").get<Index>();
    blk.sigma = vector_from(require(v, "sigma"));
    blk.basis = matrix_from_json(require(v, "basis"));
    if (blk.basis.cols() != static_cast<Index>(blk.modes.size())) {
      throw DimensionError("pod_basis_from_json: basis of '" + blk.name +
                           "' does not match its mode list");
    }
    b.blocks.push_back(std::move(blk));
  }
  return b;
}

}  // namespace liftrom
