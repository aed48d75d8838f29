#include "liftrom/tensor/serialize.hpp"

#include "liftrom/errors.hpp"

namespace liftrom {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("serialized operator is missing key '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = require(j, "rows").get<Index>();
  const auto cols = require(j, "cols").get<Index>();
  const json& data = require(j, "data");
  if (static_cast<Index>(data.size()) != rows * cols) {
    throw DimensionError("matrix_from_json: data length does not match rows*cols");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  }
  return m;
}

json sparse_to_json(const SparseMatrix& m) {
  json nnz = json::array();
  for (Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      nnz.push_back(json::array({it.row(), it.col(), it.value()}));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"nnz", std::move(nnz)}};
}

SparseMatrix sparse_from_json(const json& j) {
  const auto rows = require(j, "rows").get<Index>();
  const auto cols = require(j, "cols").get<Index>();
  std::vector<Triplet> trips;
  for (const auto& e : require(j, "nnz")) {
    trips.emplace_back(e.at(0).get<Index>(), e.at(1).get<Index>(), e.at(2).get<double>());
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

json tensor_to_json(const MatricizedTensor& t) {
  json nnz = json::array();
  for (const auto& e : t.entries()) nnz.push_back(json::array({e.row, e.flat, e.value}));
  return json{{"out_dim", t.out_dim()},
              {"order", t.order()},
              {"in_dims", t.in_dims()},
              {"nnz", std::move(nnz)}};
}

MatricizedTensor tensor_from_json(const json& j) {
  const auto out_dim = require(j, "out_dim").get<Index>();
  const auto order = require(j, "order").get<int>();
  auto in_dims = require(j, "in_dims").get<std::vector<Index>>();
  if (static_cast<int>(in_dims.size()) != order) {
    throw DimensionError("tensor_from_json: order does not match in_dims");
  }
  std::vector<TensorEntry> entries;
  for (const auto& e : require(j, "nnz")) {
    entries.push_back({e.at(0).get<Index>(), e.at(1).get<std::uint64_t>(), e.at(2).get<double>()});
  }
  return MatricizedTensor::from_entries(out_dim, std::move(in_dims), std::move(entries));
}

}  // namespace liftrom
