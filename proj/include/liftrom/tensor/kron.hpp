#pragma once

#include "liftrom/types.hpp"

namespace liftrom {

/// Kronecker product of two vectors: result[i*|y| + j] = x[i]*y[j].
Vector kron_vec(const Vector& x, const Vector& y);

/// Repeated Kronecker power x (x) x (x) ... (k factors).
Vector kron_power(const Vector& x, int k);

/// Dense Kronecker product of matrices. Used by oracles and small operators.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace liftrom
