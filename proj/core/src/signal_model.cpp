#include "riscnoma/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riscnoma {

PhaseConfig PhaseConfig::zeros(int l_ris, PhaseResolution res) {
  return PhaseConfig{RVector::Zero(l_ris), RVector::Zero(l_ris), res};
}

bool PhaseConfig::valid(double tol) const {
  return all_in_alphabet(theta1, resolution, tol) && all_in_alphabet(theta2, resolution, tol);
}

void JointSolution::validate() const {
  if (!(p_s >= 0.0)) throw std::invalid_argument("solution: p_s must be >= 0");
  if (w_s.size() != w_w.size()) throw std::invalid_argument("solution: beamformer size mismatch");
  for (const auto* m : {&lifted_ws, &lifted_ww}) {
    if (!m->has_value()) continue;
    const CMatrix& a = **m;
    if (hermitian_defect(a) > 1e-10) throw std::invalid_argument("solution: lifted matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
      throw std::invalid_argument("solution: lifted matrix not PSD");
    }
  }
}

double sinr_threshold(double rate_bits, double prelog) {
  if (!(prelog > 0.0)) throw std::invalid_argument("sinr_threshold: prelog must be positive");
  return std::exp2(rate_bits / prelog) - 1.0;
}

SinrTargets sinr_targets(const Scenario& sc, TransmissionMode mode) {
  const double p = prelog_of(mode);
  return {sinr_threshold(sc.qos_bits_s, p), sinr_threshold(sc.qos_bits_w, p)};
}

CRowVector effective_dt_channel(const ChannelSet& ch, const RVector& theta1, User user) {
  const CVector& g = user == User::strong ? ch.g_rs : ch.g_rw;
  const CVector& h = user == User::strong ? ch.h_bs : ch.h_bw;
  if (theta1.size() != g.size() || ch.f_br.rows() != g.size() || ch.f_br.cols() != h.size()) {
    throw std::invalid_argument("effective_dt_channel: dimension mismatch");
  }
  const CVector reflect = g.conjugate().cwiseProduct(unit_phasors(theta1));
  return reflect.transpose() * ch.f_br + h.adjoint();
}

cplx ct_channel(const ChannelSet& ch, const RVector& theta2) {
  if (theta2.size() != ch.gt_rw.size() || ch.f_sr.size() != ch.gt_rw.size()) {
    throw std::invalid_argument("ct_channel: dimension mismatch");
  }
  const CVector reflect = ch.gt_rw.conjugate().cwiseProduct(unit_phasors(theta2));
  return reflect.cwiseProduct(ch.f_sr).sum() + ch.h_sw;
}

DtMetrics dt_metrics(const ChannelSet& ch, const RVector& theta1, const CVector& w_s,
                     const CVector& w_w, NoisePowers noise, TransmissionMode mode) {
  if (!(noise.s > 0.0) || !(noise.w > 0.0)) {
    throw std::domain_error("dt_metrics: noise power must be positive");
  }
  if (w_s.size() != ch.n_t() || w_w.size() != ch.n_t()) {
    throw std::invalid_argument("dt_metrics: beamformer length must equal N_T");
  }
  const CRowVector hs = effective_dt_channel(ch, theta1, User::strong);
  const CRowVector hw = effective_dt_channel(ch, theta1, User::weak);
  DtMetrics m;
  m.sig_s_ws = std::norm((hs * w_s)(0));
  m.sig_s_ww = std::norm((hs * w_w)(0));
  m.sig_w_ws = std::norm((hw * w_s)(0));
  m.sig_w_ww = std::norm((hw * w_w)(0));
  const double pre = prelog_of(mode);
  m.r_s_to_w = pre * std::log2(1.0 + m.sig_s_ww / (m.sig_s_ws + noise.s));
  m.r_s = pre * std::log2(1.0 + m.sig_s_ws / noise.s);
  m.sinr_w_dt = m.sig_w_ww / (m.sig_w_ws + noise.w);
  return m;
}

double ct_sinr(const ChannelSet& ch, const RVector& theta2, double p_s, double noise_w) {
  if (!(p_s >= 0.0)) throw std::invalid_argument("ct_sinr: p_s must be >= 0");
  if (!(noise_w > 0.0)) throw std::domain_error("ct_sinr: noise power must be positive");
  if (p_s == 0.0) return 0.0;
  return p_s * std::norm(ct_channel(ch, theta2)) / noise_w;
}

WeakUserRates weak_user_rates(double sinr_dt, double sinr_ct, double r_s_to_w) {
  WeakUserRates out;
  out.r_mrc_w = 0.5 * std::log2(1.0 + sinr_dt + sinr_ct);
  out.r_w = std::min(r_s_to_w, out.r_mrc_w);
  return out;
}

RateReport check_feasibility(const ChannelSet& ch, const JointSolution& sol, const Scenario& sc,
                             TransmissionMode mode) {
  const NoisePowers noise = noise_of(sc);
  const DtMetrics dt = dt_metrics(ch, sol.phases.theta1, sol.w_s, sol.w_w, noise, mode);
  RateReport rep;
  rep.r_s = dt.r_s;
  rep.r_s_to_w = dt.r_s_to_w;
  rep.sinr_w_dt = dt.sinr_w_dt;
  if (mode == TransmissionMode::cooperative) {
    rep.sinr_w_ct = ct_sinr(ch, sol.phases.theta2, sol.p_s, noise.w);
    const WeakUserRates wr = weak_user_rates(rep.sinr_w_dt, rep.sinr_w_ct, rep.r_s_to_w);
    rep.r_mrc_w = wr.r_mrc_w;
    rep.r_w_final = wr.r_w;
    rep.phases_valid = sol.phases.valid();
  } else {
    rep.sinr_w_ct = 0.0;
    rep.r_mrc_w = std::log2(1.0 + rep.sinr_w_dt);
    rep.r_w_final = std::min(rep.r_s_to_w, rep.r_mrc_w);
    rep.phases_valid = all_in_alphabet(sol.phases.theta1, sol.phases.resolution);
  }
  rep.slack_r_s = rep.r_s - sc.qos_bits_s;
  rep.slack_r_s_to_w = rep.r_s_to_w - sc.qos_bits_w;
  rep.slack_r_mrc_w = rep.r_mrc_w - sc.qos_bits_w;
  rep.feasible = rep.slack_r_s >= -kRateTolerance && rep.slack_r_s_to_w >= -kRateTolerance &&
                 rep.slack_r_mrc_w >= -kRateTolerance && rep.phases_valid;
  return rep;
}

double total_power(const JointSolution& sol) {
  return sol.w_s.squaredNorm() + sol.w_w.squaredNorm() + sol.p_s;
}

}  // namespace riscnoma
