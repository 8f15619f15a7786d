#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace riscnoma {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

// Largest |A - A^H| entry; zero for exactly Hermitian input.
inline double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace riscnoma
