#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "riscnoma/eig.hpp"
#include "riscnoma/sdp.hpp"
#include "support.hpp"

namespace riscnoma {
namespace {

using testing::random_cmatrix;
using testing::random_cvector;
using testing::random_hermitian;

SdpProblem single_block(int n, const CMatrix& cost) {
  SdpProblem p;
  p.block_sizes = {n};
  p.cost = {cost};
  return p;
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

TEST(SolveSdp, FixedCornerEntry) {
  SdpProblem p = single_block(2, CMatrix::Identity(2, 2));
  CMatrix e11 = CMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  p.constraints.push_back({{e11}, Sense::eq, 1.0});
  const SdpSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal()) << to_string(s.status);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-6);
  CMatrix want = CMatrix::Zero(2, 2);
  want(0, 0) = 1.0;
  EXPECT_LT((s.x[0] - want).norm(), 1e-6);
}

TEST(SolveSdp, TraceConstraintGivesMinEigenvalue) {
  CounterRng rng(21);
  for (int n : {2, 5, 8}) {
    const CMatrix c = random_hermitian(n, rng);
    SdpProblem p = single_block(n, c);
    p.constraints.push_back({{CMatrix::Identity(n, n)}, Sense::eq, 1.0});
    const SdpSolution s = solve_sdp(p);
    ASSERT_TRUE(s.optimal());
    EXPECT_NEAR(s.primal_objective, min_eigenvalue(c), 1e-6);
    EXPECT_NEAR(s.dual_objective, min_eigenvalue(c), 1e-6);
  }
}

TEST(SolveSdp, FixedDiagonalsMatchEqualityRows) {
  CounterRng rng(22);
  const int n = 4;
  const CMatrix c = random_hermitian(n, rng);
  SdpProblem a = single_block(n, c);
  SdpProblem b = single_block(n, c);
  for (int i = 0; i < n; ++i) {
    CMatrix e = CMatrix::Zero(n, n);
    e(i, i) = 1.0;
    a.constraints.push_back({{e}, Sense::eq, 1.0});
    b.fixed_diagonals.push_back({0, i, 1.0});
  }
  const SdpSolution sa = solve_sdp(a), sb = solve_sdp(b);
  ASSERT_TRUE(sa.optimal());
  ASSERT_TRUE(sb.optimal());
  EXPECT_NEAR(sa.primal_objective, sb.primal_objective, 1e-7);
  EXPECT_LT((sa.x[0] - sb.x[0]).norm(), 1e-4);
}

TEST(SolveSdp, SingleUserBeamforming) {
  // min Tr(W) s.t. h^H W h >= 1 has optimum 1 / |h|^2 at W = h h^H / |h|^4.
  CounterRng rng(23);
  const CVector h = random_cvector(4, rng);
  SdpProblem p = single_block(4, CMatrix::Identity(4, 4));
  p.constraints.push_back({{h * h.adjoint()}, Sense::geq, 1.0});
  const SdpSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, 1.0 / h.squaredNorm(), 1e-7 / h.squaredNorm());
  EXPECT_GE(s.y(0), 0.0);
  const CMatrix want = h * h.adjoint() / std::pow(h.squaredNorm(), 2);
  EXPECT_LT((s.x[0] - want).norm() / want.norm(), 1e-5);
}

// Dual of min <C,X> s.t. Tr X = 1, <A,X> = beta: max y1 + beta y2 with
// C - y1 I - y2 A >= 0, i.e. maximize g(y2) = lambda_min(C - y2 A) + beta y2.
// g is concave; golden-section search finds its maximum.
double dual_oracle(const CMatrix& c, const CMatrix& a, double beta) {
  auto g = [&](double t) { return min_eigenvalue(c - t * a) + beta * t; };
  double lo = -100.0, hi = 100.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = g(x1);
    }
  }
  return g(0.5 * (lo + hi));
}

TEST(SolveSdp, RandomInstancesMatchDualOracle) {
  CounterRng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    const CMatrix c = random_hermitian(n, rng);
    const CMatrix a = random_hermitian(n, rng);
    // A strictly positive definite point with unit trace fixes a feasible beta.
    const CMatrix m = random_cmatrix(n, n, rng);
    CMatrix x0 = m * m.adjoint() + CMatrix::Identity(n, n);
    x0 /= x0.trace().real();
    const double beta = (a * x0).trace().real();
    SdpProblem p = single_block(n, c);
    p.constraints.push_back({{CMatrix::Identity(n, n)}, Sense::eq, 1.0});
    p.constraints.push_back({{a}, Sense::eq, beta});
    const SdpSolution s = solve_sdp(p);
    ASSERT_TRUE(s.optimal()) << to_string(s.status);
    const double want = dual_oracle(c, a, beta);
    EXPECT_LE(std::abs(s.primal_objective - want), 1e-5 * std::max(1.0, std::abs(want)));
  }
}

TEST(SolveSdp, TwoBlocksWithCoupling) {
  // min Tr X1 + 2 Tr X2 s.t. Tr X1 + Tr X2 >= 3  ->  3 with X2 = 0.
  SdpProblem p;
  p.block_sizes = {2, 3};
  p.cost = {CMatrix::Identity(2, 2), 2.0 * CMatrix::Identity(3, 3)};
  p.constraints.push_back({{CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)}, Sense::geq, 3.0});
  const SdpSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, 3.0, 1e-6);
  EXPECT_LT(s.x[1].norm(), 1e-6);
}

TEST(SolveSdp, DetectsInfeasibility) {
  SdpProblem p = single_block(3, CMatrix::Identity(3, 3));
  p.constraints.push_back({{CMatrix::Identity(3, 3)}, Sense::eq, -1.0});
  EXPECT_EQ(solve_sdp(p).status, SdpStatus::infeasible);
}

TEST(SolveSdp, WeakDualityAlongTrace) {
  CounterRng rng(25);
  const int n = 5;
  SdpProblem p = single_block(n, random_hermitian(n, rng) + 3.0 * CMatrix::Identity(n, n));
  for (int i = 0; i < n; ++i) p.fixed_diagonals.push_back({0, i, 1.0});
  const CVector h = random_cvector(n, rng);
  p.constraints.push_back({{h * h.adjoint()}, Sense::geq, 0.5 * h.squaredNorm()});
  SdpOptions opt;
  opt.record_trace = true;
  const SdpSolution s = solve_sdp(p, opt);
  ASSERT_TRUE(s.optimal());
  ASSERT_EQ(static_cast<int>(s.trace.size()), s.iterations + 1);
  for (const auto& it : s.trace) {
    const double scale = 1.0 + std::abs(it.primal_objective) + std::abs(it.dual_objective);
    EXPECT_GE(it.primal_objective - it.dual_objective, -it.cross_term - 1e-12 * scale);
  }
}

TEST(SolveSdp, Deterministic) {
  CounterRng rng(26);
  const CMatrix c = random_hermitian(4, rng);
  SdpProblem p = single_block(4, c);
  p.constraints.push_back({{CMatrix::Identity(4, 4)}, Sense::eq, 2.0});
  const SdpSolution a = solve_sdp(p), b = solve_sdp(p);
  EXPECT_EQ(a.x[0], b.x[0]);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SdpProblem, ValidateRejectsNonHermitian) {
  CMatrix c = CMatrix::Identity(2, 2);
  c(0, 1) = 1.0;
  SdpProblem p = single_block(2, c);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  SdpProblem q = single_block(2, CMatrix::Identity(3, 3));
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(SdpProblem, TripletDump) {
  SdpProblem p = single_block(2, CMatrix::Identity(2, 2));
  p.constraints.push_back({{CMatrix::Identity(2, 2)}, Sense::geq, 1.0});
  p.fixed_diagonals.push_back({0, 1, 1.0});
  std::ostringstream out;
  write_sdp_triplets(out, p);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("blocks 2\n", 0), 0u);
  EXPECT_NE(s.find("row 0 geq 1"), std::string::npos);
  EXPECT_NE(s.find("diag 0 1 1"), std::string::npos);
}

TEST(MaxEigpair, Identity) {
  const EigPair e = max_eigpair(CMatrix::Identity(4, 4));
  EXPECT_NEAR(e.value, 1.0, 1e-14);
  EXPECT_NEAR(e.vector.norm(), 1.0, 1e-14);
}

TEST(MaxEigpair, Diagonal) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const EigPair e = max_eigpair(m);
  EXPECT_NEAR(e.value, 3.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vector(0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vector(1)), 0.0, 1e-14);
}

TEST(MaxEigpair, RandomResidualAndDominance) {
  CounterRng rng(27);
  const CMatrix m = random_hermitian(8, rng);
  const EigPair e = max_eigpair(m);
  EXPECT_LE((m * e.vector - e.value * e.vector).norm(), 1e-9 * m.norm());
  for (int i = 0; i < 100; ++i) {
    CVector v = random_cvector(8, rng);
    v.normalize();
    EXPECT_GE(e.value, (v.adjoint() * m * v)(0).real() - 1e-12);
  }
}

TEST(MaxEigpair, TraceDominatesForPsd) {
  CounterRng rng(28);
  const CMatrix a = random_cmatrix(6, 3, rng);
  const CMatrix m = a * a.adjoint();
  EXPECT_GE(m.trace().real(), max_eigpair(m).value);
}

TEST(MaxEigpair, RejectsNonHermitian) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = cplx(0.0, 1.0);
  EXPECT_THROW(max_eigpair(m), std::invalid_argument);
}

}  // namespace
}  // namespace riscnoma
