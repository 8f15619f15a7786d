#include "riscnoma/eig.hpp"

#include <algorithm>
#include <stdexcept>

namespace riscnoma {

namespace {

void require_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("eigen: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermitian_defect(m) > tol * scale) {
    throw std::invalid_argument("eigen: matrix is not Hermitian");
  }
}

}  // namespace

EigPair max_eigpair(const CMatrix& m, double hermitian_tol) {
  require_hermitian(m, hermitian_tol);
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen: decomposition failed");
  const Eigen::Index last = sym.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last).normalized()};
}

RVector descending_eigenvalues(const CMatrix& m) {
  require_hermitian(m, 1e-10);
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

}  // namespace riscnoma
