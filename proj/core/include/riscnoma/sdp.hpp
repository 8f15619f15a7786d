#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "riscnoma/linalg.hpp"

namespace riscnoma {

enum class Sense { eq, geq };

/// Linear constraint sum_k Tr(A_k X_k) (sense) rhs. A block given as an empty
/// (0x0) matrix contributes nothing.
struct SdpConstraint {
  std::vector<CMatrix> blocks;
  Sense sense = Sense::eq;
  double rhs = 0.0;
};

/// X_block(index, index) == value.
struct FixedDiagonal {
  int block = 0;
  int index = 0;
  double value = 1.0;
};

/// minimize sum_k Tr(C_k X_k) over Hermitian PSD blocks X_k.
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<CMatrix> cost;
  std::vector<SdpConstraint> constraints;
  std::vector<FixedDiagonal> fixed_diagonals;

  /// Throws std::invalid_argument on inconsistent dimensions or non-Hermitian data.
  void validate() const;
  int constraint_count() const {
    return static_cast<int>(constraints.size() + fixed_diagonals.size());
  }
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iters = 200;
  double infeasibility_tol = 1e-8;
  bool record_trace = false;
};

enum class SdpStatus { optimal, infeasible, dual_infeasible, max_iters, numerical_error };
std::string_view to_string(SdpStatus status);

/// Per-iteration record on the internally scaled problem.
struct SdpIterate {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double complementarity = 0.0;  // sum <X,Z> + x'z
  double cross_term = 0.0;       // |y'r_p| + |<R_d,X>|, bounds how far pobj - dobj may drop below 0
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_error;
  std::vector<CMatrix> x;
  RVector y;  // constraints first, then fixed diagonals
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;              // relative, in the caller's objective units
  double primal_residual = 0.0;  // relative, scaled problem
  double dual_residual = 0.0;    // relative, scaled problem
  int iterations = 0;
  std::vector<SdpIterate> trace;

  bool optimal() const { return status == SdpStatus::optimal; }
  /// True when the returned point meets `tol` on all three measures whatever the status.
  bool accurate_to(double tol) const {
    return !x.empty() && gap <= tol && primal_residual <= tol && dual_residual <= tol;
  }
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

/// Writes the problem as a sparse triplet list:
///   blocks <n_1> ... ; cost/constraint lines "<con> <blk> <row> <col> <re> <im>".
void write_sdp_triplets(std::ostream& out, const SdpProblem& problem);

}  // namespace riscnoma
