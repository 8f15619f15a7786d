#pragma once

#include <optional>

#include "riscnoma/linalg.hpp"
#include "riscnoma/phases.hpp"
#include "riscnoma/scenario.hpp"

namespace riscnoma {

using CRowVector = Eigen::RowVectorXcd;

enum class User { strong, weak };

/// Cooperative = two half-duration stages (1/2 pre-log, MRC at the weak user).
/// Direct = single full-duration NOMA stage without relaying.
enum class TransmissionMode { cooperative, direct };

inline constexpr double kRateTolerance = 1e-6;  // bit/s/Hz

struct PhaseConfig {
  RVector theta1;  // DT stage
  RVector theta2;  // CT stage
  PhaseResolution resolution;

  static PhaseConfig zeros(int l_ris, PhaseResolution res);
  bool valid(double tol = 1e-9) const;
};

struct JointSolution {
  CVector w_s;
  CVector w_w;
  std::optional<CMatrix> lifted_ws;
  std::optional<CMatrix> lifted_ww;
  double p_s = 0.0;
  PhaseConfig phases;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct NoisePowers {
  double s = 1.0;
  double w = 1.0;
};
inline NoisePowers noise_of(const Scenario& sc) { return {sc.noise_s(), sc.noise_w()}; }

/// SINR threshold implied by a rate target under the given pre-log factor:
/// prelog * log2(1 + r) >= rate  <=>  r >= 2^(rate / prelog) - 1.
double sinr_threshold(double rate_bits, double prelog);
inline double prelog_of(TransmissionMode mode) {
  return mode == TransmissionMode::cooperative ? 0.5 : 1.0;
}

struct SinrTargets {
  double s = 0.0;
  double w = 0.0;
};
SinrTargets sinr_targets(const Scenario& sc, TransmissionMode mode = TransmissionMode::cooperative);

/// Row vector hbar with received DT signal hbar * w:
/// hbar = g^H diag(e^{j theta1}) F + h^H for the requested user.
CRowVector effective_dt_channel(const ChannelSet& ch, const RVector& theta1, User user);

/// Combined CT channel g~^H diag(e^{j theta2}) f + h_sw.
cplx ct_channel(const ChannelSet& ch, const RVector& theta2);

struct DtMetrics {
  double r_s = 0.0;
  double r_s_to_w = 0.0;
  double sinr_w_dt = 0.0;
  // received powers, useful to callers that need the raw terms
  double sig_s_ws = 0.0;  // |hbar_s w_s|^2
  double sig_s_ww = 0.0;  // |hbar_s w_w|^2
  double sig_w_ws = 0.0;  // |hbar_w w_s|^2
  double sig_w_ww = 0.0;  // |hbar_w w_w|^2
};

DtMetrics dt_metrics(const ChannelSet& ch, const RVector& theta1, const CVector& w_s,
                     const CVector& w_w, NoisePowers noise,
                     TransmissionMode mode = TransmissionMode::cooperative);

double ct_sinr(const ChannelSet& ch, const RVector& theta2, double p_s, double noise_w);

struct WeakUserRates {
  double r_mrc_w = 0.0;
  double r_w = 0.0;
};
WeakUserRates weak_user_rates(double sinr_dt, double sinr_ct, double r_s_to_w);

struct RateReport {
  double r_s = 0.0;
  double r_s_to_w = 0.0;
  double sinr_w_dt = 0.0;
  double sinr_w_ct = 0.0;
  double r_mrc_w = 0.0;
  double r_w_final = 0.0;
  bool phases_valid = true;
  bool feasible = false;
  // rate minus target for (R_s, R_s->w, R_MRC,w), in bit/s/Hz
  double slack_r_s = 0.0;
  double slack_r_s_to_w = 0.0;
  double slack_r_mrc_w = 0.0;
};

RateReport check_feasibility(const ChannelSet& ch, const JointSolution& sol, const Scenario& sc,
                             TransmissionMode mode = TransmissionMode::cooperative);

double total_power(const JointSolution& sol);

}  // namespace riscnoma
