#pragma once

#include <stdexcept>
#include <vector>

#include "riscnoma/binary_program.hpp"
#include "riscnoma/scenario.hpp"
#include "riscnoma/signal_model.hpp"

namespace riscnoma {

/// The weak user misses its target in the DT stage and the CT link has zero gain.
class UncoverableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Z = a a^H, u = a conj(h_sw) with a_m = conj(g~_m) f_m, so that
/// |g~^H Theta_2 f + h_sw|^2 = v^H Z v + 2 Re(v^H u) + |h_sw|^2, v = e^{-j theta_2}.
struct CtQuadratics {
  CMatrix z;
  CVector u;
  cplx h_sw{0.0, 0.0};
  double rho = 0.0;  // residual SINR target of the CT stage
  int levels = 2;
  bool continuous = false;

  int elements() const { return static_cast<int>(u.size()); }
  QuadraticForm gain_form() const { return {z, u, std::norm(h_sw)}; }
  double gain(const RVector& theta2) const { return evaluate(gain_form(), theta2); }
  /// L * lambda_max(Z) + 2 sum |u_m| + |h_sw|^2
  double gain_upper_bound() const;
};

CtQuadratics build_ct_quadratics(const ChannelSet& ch, double rho, PhaseResolution res);

double combined_ct_gain(const ChannelSet& ch, const RVector& theta2);

/// P_S = max(0, sigma_w^2 (r_w - SINR_w^(1)) / gain). Returns exactly 0 when the
/// DT stage alone meets r_w; throws UncoverableError when it does not and the
/// combined CT gain is zero.
double relay_power(const ChannelSet& ch, const PhaseConfig& phases, const CVector& w_s,
                   const CVector& w_w, const Scenario& sc);
/// Same using lifted beamformers W_s, W_w.
double relay_power_lifted(const ChannelSet& ch, const PhaseConfig& phases, const CMatrix& w_s,
                          const CMatrix& w_w, const Scenario& sc);

struct CtPhaseResult {
  bool feasible = false;
  RVector theta2;
  double gain = 0.0;
  double min_slack = 0.0;
};

/// Exact phases via the single-constraint binary program
/// P_S (v^H Z v + 2 Re(v^H u) + |h|^2) / sigma_w^2 >= rho (max-min-slack point).
CtPhaseResult solve_ct_phases_optimal(const CtQuadratics& ct, double p_s, double noise_w,
                                      const IlpOptions& opt = {});

struct CtRefinementOptions {
  int max_sweeps = 50;
  double rel_tol = 1e-9;
  bool record_trace = false;
};

struct CtRefinementResult {
  RVector theta2;
  double gain = 0.0;
  int sweeps = 0;
  std::vector<double> trace;  // gain after every element update, starting with the initial gain
};

/// Element-wise successive refinement: theta_l = nearest level to -arg(alpha_l),
/// alpha_l = sum_{n != l} Z(l, n) e^{-j theta_n} + u(l).
CtRefinementResult solve_ct_phases_refinement(const CtQuadratics& ct, const RVector& theta2_init,
                                              const CtRefinementOptions& opt = {});

}  // namespace riscnoma
