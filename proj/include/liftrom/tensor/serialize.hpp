#pragma once

#include "liftrom/tensor/matricized_tensor.hpp"
#include "liftrom/types.hpp"

#include <nlohmann/json.hpp>

namespace liftrom {

// JSON schemas:
//   dense matrix   {"rows": R, "cols": C, "data": [row-major values]}
//   sparse matrix  {"rows": R, "cols": C, "nnz": [[i, j, v], ...]}  (column-major order)
//   tensor         {"out_dim": n, "order": k, "in_dims": [...], "nnz": [[row, flat, v], ...]}
// Vectors use the dense schema with cols = 1.

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json sparse_to_json(const SparseMatrix& m);
SparseMatrix sparse_from_json(const nlohmann::json& j);

nlohmann::json tensor_to_json(const MatricizedTensor& t);
MatricizedTensor tensor_from_json(const nlohmann::json& j);

}  // namespace liftrom
