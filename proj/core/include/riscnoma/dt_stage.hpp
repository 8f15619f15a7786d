#pragma once

#include <vector>

#include "riscnoma/binary_program.hpp"
#include "riscnoma/scenario.hpp"
#include "riscnoma/sdp.hpp"
#include "riscnoma/signal_model.hpp"

namespace riscnoma {

inline constexpr double kRankOneRatio = 1e-6;

struct DtOptions {
  TransmissionMode mode = TransmissionMode::cooperative;
  double sdp_tol = 1e-9;     // target accuracy for the relaxations
  double sdp_accept = 1e-6;  // looser accuracy accepted when the tight target stalls
  int penalty_max_iters = 30;
  double penalty_tol = 1e-6;
  IlpOptions ilp;
};

enum class StageStatus { ok, infeasible, solver_failure };
std::string_view to_string(StageStatus s);

/// eta = r_w - P_S |g~^H Theta_2 f + h_sw|^2 / sigma_w^2 (SINR units). In direct
/// mode the CT link is absent and eta = r_w.
double residual_weak_target(const ChannelSet& ch, const PhaseConfig& phases, double p_s,
                            const Scenario& sc, TransmissionMode mode);

struct BeamformingResult {
  StageStatus status = StageStatus::solver_failure;
  CVector w_s;
  CVector w_w;
  CMatrix lifted_ws;
  CMatrix lifted_ww;
  double sdr_objective = 0.0;  // Tr(W_s) + Tr(W_w)
  double rank_ratio_s = 0.0;   // lambda_2 / lambda_1
  double rank_ratio_w = 0.0;
  bool rank_fallback = false;
  double eta = 0.0;
};

/// Semidefinite relaxation of the DT power minimization for fixed phases and
/// P_S, followed by principal-eigenvector extraction. Powers along the
/// extracted directions are then set to the smallest values meeting every
/// active QoS constraint.
BeamformingResult solve_active_beamforming(const ChannelSet& ch, const PhaseConfig& phases,
                                           double p_s, const Scenario& sc,
                                           const DtOptions& opt = {});

/// Quadratic forms |(g_i^H Theta F + h_i^H) w_k|^2 = v^H X_ik v + 2 Re(v^H y_ik) + c_ik,
/// with v = e^{-j theta_1}, stored for users i and beams k in {s, w}.
struct DtQuadratics {
  // index [i][k], 0 = strong, 1 = weak
  CMatrix x[2][2];
  CVector y[2][2];
  double c[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double alpha1 = 0.0;  // h_s^H (r_w W_s - W_w) h_s + r_w sigma_s^2
  double alpha2 = 0.0;  // h_w^H (eta W_s - W_w) h_w + eta sigma_w^2
  double eta = 0.0;
  double r_s = 0.0;
  double r_w = 0.0;
  double sigma_s = 1.0;  // noise powers
  double sigma_w = 1.0;
  int levels = 2;
  bool continuous = false;

  int elements() const { return static_cast<int>(y[0][0].size()); }
  /// The active QoS constraints as forms f(theta) >= rhs, in SINR units.
  std::vector<QuadraticForm> constraint_forms() const;
  std::vector<double> constraint_rhs() const;
  /// Smallest normalized slack over the active constraints at `theta1`.
  double min_normalized_slack(const RVector& theta1) const;
};

DtQuadratics build_dt_quadratics(const ChannelSet& ch, const CMatrix& w_s, const CMatrix& w_w,
                                 double p_s, const RVector& theta2, const Scenario& sc,
                                 TransmissionMode mode = TransmissionMode::cooperative);

struct DtPhaseResult {
  StageStatus status = StageStatus::solver_failure;
  RVector theta1;
  double min_slack = 0.0;          // normalized, at the returned phases
  bool projected_feasible = true;  // penalty path only
  std::vector<double> penalty_trace;
  int sdp_solves = 0;
};

/// Exact phases via the one-hot binary program (max-min-slack point).
DtPhaseResult solve_dt_phases_optimal(const DtQuadratics& q, const DtOptions& opt = {});

/// Rank-one penalty iterations on the lifted phase matrix, then projection.
DtPhaseResult solve_dt_phases_penalty(const DtQuadratics& q, const DtOptions& opt = {});

/// Lifted matrix [[X, y], [y^H, c]] of one quadratic form.
CMatrix lifted_form(const QuadraticForm& f);

}  // namespace riscnoma
