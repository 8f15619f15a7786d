#pragma once

#include "riscnoma/linalg.hpp"

namespace riscnoma {

struct EigPair {
  double value = 0.0;
  CVector vector;  // unit norm
};

/// Largest eigenvalue and a unit eigenvector. Throws std::invalid_argument if
/// `m` is not Hermitian within `hermitian_tol` (relative to its largest entry).
EigPair max_eigpair(const CMatrix& m, double hermitian_tol = 1e-10);

/// Eigenvalues in descending order.
RVector descending_eigenvalues(const CMatrix& m);

}  // namespace riscnoma
