#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace liftrom {

// Dense storage is Eigen's default column-major layout throughout.
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

}  // namespace liftrom
