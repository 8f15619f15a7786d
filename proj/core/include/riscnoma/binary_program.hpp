#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riscnoma/linalg.hpp"

namespace riscnoma {

/// Thrown when an exact search is requested beyond its size guard.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Quadratic form f(theta) = v^H A v + 2 Re(v^H b) + c with v_m = e^{-j theta_m}.
struct QuadraticForm {
  CMatrix a;
  CVector b;
  double c = 0.0;
};

double evaluate(const QuadraticForm& q, const RVector& theta);

/// The 2Q-1 phase differences {-(Q-1), ..., 0, ..., Q-1} * 2pi/Q, indexed 0..2Q-2.
RVector theta_delta(int levels);

/// Linear function of the one-hot indicators:
///   value = constant + sum_m element[m](s_m) + sum_{m<n} pair[p(m,n)](s_m - s_n + Q - 1)
/// where s_m is the level chosen by delta_m. The pair indicators are fixed by the
/// coupling identity theta_Delta' delta_m - theta_Delta' delta_n = theta_Delta' delta~_mn,
/// so only the element groups are free.
struct PsiExpression {
  std::vector<RVector> element;  // L vectors of length Q
  std::vector<RVector> pair;     // L(L-1)/2 vectors of length 2Q-1, (m<n) row-major
  double constant = 0.0;

  double value(const std::vector<int>& levels, int q) const;
};

/// Linearization of a quadratic form over Q-level phases.
PsiExpression psi_expression(const QuadraticForm& q, int levels);

/// Explicit one-hot encoding of a level vector. delta[m] has length Q over the
/// non-negative phases, delta_pair[p(m,n)] has length 2Q-1.
struct OneHotAssignment {
  std::vector<RVector> delta;
  std::vector<RVector> delta_pair;
};
OneHotAssignment encode_levels(const std::vector<int>& levels, int q);
/// psi(A, b, delta, delta~) + c evaluated directly from indicator vectors.
double psi(const QuadraticForm& q, const OneHotAssignment& x, int levels);
/// theta_m = theta_Delta' delta_m, after the one-hot index shift.
RVector decode_phases(const OneHotAssignment& x, int levels);

inline int pair_index(int m, int n, int l) { return m * l - m * (m + 1) / 2 + (n - m - 1); }

/// expression >= rhs
struct PsiConstraint {
  PsiExpression expr;
  double rhs = 0.0;

  /// (value - rhs) / max(1, |rhs - constant|)
  double normalized_slack(const std::vector<int>& levels, int q) const;
};

struct IlpProblem {
  int elements = 0;
  int levels = 2;
  std::vector<PsiConstraint> constraints;

  /// Throws std::invalid_argument on inconsistent group sizes.
  void validate() const;
};

struct IlpOptions {
  int max_elements = 8;
  int max_bits = 3;
};

struct IlpResult {
  bool feasible = false;
  std::vector<int> levels;
  double min_slack = 0.0;  // normalized, over all constraints
  double objective = 0.0;  // only with an objective
  std::int64_t nodes = 0;
};

/// Depth-first branch and bound. Without an objective, maximizes the minimum
/// normalized slack and reports feasible iff it is >= 0. With an objective,
/// returns its exact maximizer over the feasible set.
IlpResult solve_binary_feasibility(const IlpProblem& problem,
                                   const std::optional<PsiExpression>& objective = std::nullopt,
                                   const IlpOptions& options = {});

enum class SearchMode { maximize, feasibility_set };

struct BruteForceResult {
  std::vector<int> levels;
  RVector theta;
  double value = 0.0;  // objective (maximize) or min normalized slack (feasibility_set)
  bool feasible = true;
};

/// Exhaustive search over all Q^L phase vectors; ties resolve to the
/// lexicographically smallest level vector. Maximize uses forms[0] only;
/// feasibility_set maximizes min_i (f_i - rhs_i) / max(1, |rhs_i - c_i|).
BruteForceResult brute_force_phase_search(const std::vector<QuadraticForm>& forms,
                                          const std::vector<double>& rhs, int levels, int elements,
                                          SearchMode mode);
inline BruteForceResult brute_force_phase_search(const QuadraticForm& form, int levels,
                                                 int elements) {
  return brute_force_phase_search({form}, {}, levels, elements, SearchMode::maximize);
}

inline constexpr double kBruteForceLimit = 1e7;

}  // namespace riscnoma
