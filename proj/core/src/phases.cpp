#include "riscnoma/phases.hpp"

#include <cmath>
#include <stdexcept>

namespace riscnoma {

double wrap_phase(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

int nearest_level(double angle, int levels) {
  if (levels < 1) throw std::invalid_argument("nearest_level: levels must be >= 1");
  const double step = kTwoPi / levels;
  const double a = wrap_phase(angle);
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int q = 0; q < levels; ++q) {
    double d = std::abs(a - q * step);
    d = std::min(d, kTwoPi - d);
    if (d < best_dist - 1e-12) {
      best = q;
      best_dist = d;
    }
  }
  return best;
}

double project_phase(double angle, PhaseResolution res) {
  if (res.continuous()) return wrap_phase(angle);
  return nearest_level(angle, res.levels()) * res.step();
}

RVector project_phases(const RVector& angles, PhaseResolution res) {
  RVector out(angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) out(i) = project_phase(angles(i), res);
  return out;
}

bool in_alphabet(double theta, PhaseResolution res, double tol) {
  if (!std::isfinite(theta)) return false;
  if (res.continuous()) return theta >= -tol && theta < kTwoPi + tol;
  const double step = res.step();
  const double k = std::round(theta / step);
  if (k < 0 || k > res.levels() - 1) return false;
  return std::abs(theta - k * step) <= tol;
}

bool all_in_alphabet(const RVector& theta, PhaseResolution res, double tol) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!in_alphabet(theta(i), res, tol)) return false;
  }
  return true;
}

RVector phases_from_levels(const std::vector<int>& levels, int q) {
  RVector out(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = kTwoPi * levels[i] / q;
  }
  return out;
}

std::vector<int> levels_from_phases(const RVector& theta, int q) {
  std::vector<int> out(static_cast<std::size_t>(theta.size()));
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    out[static_cast<std::size_t>(i)] = nearest_level(theta(i), q);
  }
  return out;
}

RVector random_phases(int count, PhaseResolution res, CounterRng& rng) {
  RVector out(count);
  for (int i = 0; i < count; ++i) {
    if (res.continuous()) {
      out(i) = kTwoPi * rng.uniform();
    } else {
      out(i) = res.step() * static_cast<double>(rng.below(static_cast<std::uint64_t>(res.levels())));
    }
  }
  return out;
}

CVector unit_phasors(const RVector& theta) {
  CVector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) out(i) = std::polar(1.0, theta(i));
  return out;
}

}  // namespace riscnoma
