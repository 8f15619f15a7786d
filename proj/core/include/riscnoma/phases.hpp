#pragma once

#include <vector>

#include "riscnoma/linalg.hpp"
#include "riscnoma/rng.hpp"

namespace riscnoma {

/// Phase-shift alphabet. bits >= 1 gives the Q = 2^bits uniform levels
/// {0, 2pi/Q, ..., 2pi(Q-1)/Q}; bits == 0 denotes continuous phases in [0, 2pi).
struct PhaseResolution {
  int bits = 1;

  static PhaseResolution continuous_phases() { return PhaseResolution{0}; }
  bool continuous() const { return bits == 0; }
  int levels() const { return 1 << bits; }
  double step() const { return kTwoPi / levels(); }
};

/// Maps any angle into [0, 2pi).
double wrap_phase(double angle);

/// Index of the level closest to `angle` in circular distance. Equidistant
/// candidates resolve to the smaller phase.
int nearest_level(double angle, int levels);

/// Projection onto the alphabet; identity (wrapped) for continuous phases.
double project_phase(double angle, PhaseResolution res);
RVector project_phases(const RVector& angles, PhaseResolution res);

bool in_alphabet(double theta, PhaseResolution res, double tol = 1e-9);
bool all_in_alphabet(const RVector& theta, PhaseResolution res, double tol = 1e-9);

RVector phases_from_levels(const std::vector<int>& levels, int q);
std::vector<int> levels_from_phases(const RVector& theta, int q);

/// Uniform draw from the alphabet (or [0, 2pi) when continuous).
RVector random_phases(int count, PhaseResolution res, CounterRng& rng);

/// Elementwise e^{j theta}.
CVector unit_phasors(const RVector& theta);

}  // namespace riscnoma
