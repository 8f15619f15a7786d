#include <benchmark/benchmark.h>

#include "riscnoma/binary_program.hpp"
#include "riscnoma/ct_stage.hpp"
#include "riscnoma/rng.hpp"
#include "riscnoma/sdp.hpp"

namespace riscnoma {
namespace {

CMatrix gaussian(int rows, int cols, CounterRng& rng) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

// min Tr(C X) s.t. diag(X) = 1, the lifted phase problem shape.
SdpProblem unit_diagonal_problem(int n, CounterRng& rng) {
  const CMatrix a = gaussian(n, n, rng);
  SdpProblem p;
  p.block_sizes = {n};
  p.cost = {a * a.adjoint()};
  for (int i = 0; i < n; ++i) p.fixed_diagonals.push_back({0, i, 1.0});
  return p;
}

void BM_SolveSdpUnitDiagonal(benchmark::State& state) {
  CounterRng rng(1);
  const SdpProblem p = unit_diagonal_problem(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sdp(p));
  }
}
BENCHMARK(BM_SolveSdpUnitDiagonal)->Arg(5)->Arg(11)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

QuadraticForm random_form(int l, CounterRng& rng) {
  const CMatrix g = gaussian(l, 2, rng);
  return {g * g.adjoint(), gaussian(l, 1, rng), 0.0};
}

void BM_BranchAndBound(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int q = static_cast<int>(state.range(1));
  CounterRng rng(2);
  IlpProblem p;
  p.elements = l;
  p.levels = q;
  for (int i = 0; i < 3; ++i) {
    const QuadraticForm f = random_form(l, rng);
    p.constraints.push_back({psi_expression(f, q), f.a.trace().real()});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_binary_feasibility(p));
  }
}
BENCHMARK(BM_BranchAndBound)->Args({4, 2})->Args({6, 4})->Args({8, 4})->Args({6, 8})
    ->Unit(benchmark::kMicrosecond);

void BM_SuccessiveRefinement(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  CounterRng rng(3);
  CtQuadratics ct;
  const CVector a = gaussian(l, 1, rng);
  ct.h_sw = rng.complex_normal();
  ct.z = a * a.adjoint();
  ct.u = a * std::conj(ct.h_sw);
  ct.levels = 32;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ct_phases_refinement(ct, RVector::Zero(l)));
  }
}
BENCHMARK(BM_SuccessiveRefinement)->Arg(20)->Arg(60)->Arg(100);

}  // namespace
}  // namespace riscnoma
