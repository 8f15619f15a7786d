#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "riscnoma/linalg.hpp"
#include "riscnoma/rng.hpp"
#include "riscnoma/scenario.hpp"

namespace riscnoma::testing {

inline CVector random_cvector(int n, CounterRng& rng, double scale = 1.0) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * rng.complex_normal();
  return v;
}

inline CMatrix random_cmatrix(int rows, int cols, CounterRng& rng, double scale = 1.0) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = scale * rng.complex_normal();
  }
  return m;
}

inline CMatrix random_hermitian(int n, CounterRng& rng) {
  const CMatrix a = random_cmatrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

/// Unit-variance Rayleigh channels of the requested dimensions.
inline ChannelSet random_channel_set(int n_t, int l, CounterRng& rng) {
  ChannelSet ch;
  ch.h_bs = random_cvector(n_t, rng);
  ch.h_bw = random_cvector(n_t, rng);
  ch.f_br = random_cmatrix(l, n_t, rng);
  ch.g_rs = random_cvector(l, rng);
  ch.g_rw = random_cvector(l, rng);
  ch.f_sr = random_cvector(l, rng);
  ch.gt_rw = random_cvector(l, rng);
  ch.h_sw = rng.complex_normal();
  return ch;
}

/// Scenario with unit noise so that unit-variance channels give O(1) SINRs.
inline Scenario unit_noise_scenario(int n_t, int l, int bits) {
  Scenario sc;
  sc.n_t = n_t;
  sc.l_ris = l;
  sc.bits = bits;
  sc.noise_power_dbm_s = 30.0;  // 1 W
  sc.noise_power_dbm_w = 30.0;
  return sc;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace riscnoma::testing
