#include "riscnoma/ct_stage.hpp"

#include <cmath>
#include <limits>

#include "riscnoma/eig.hpp"

namespace riscnoma {

double CtQuadratics::gain_upper_bound() const {
  const double lmax = elements() > 0 ? max_eigpair(z, 1e-8).value : 0.0;
  return elements() * std::max(0.0, lmax) + 2.0 * u.cwiseAbs().sum() + std::norm(h_sw);
}

CtQuadratics build_ct_quadratics(const ChannelSet& ch, double rho, PhaseResolution res) {
  if (ch.gt_rw.size() != ch.f_sr.size()) throw std::invalid_argument("ct: dimension mismatch");
  CtQuadratics ct;
  const CVector a = ch.gt_rw.conjugate().cwiseProduct(ch.f_sr);
  ct.z = a * a.adjoint();
  ct.u = a * std::conj(ch.h_sw);
  ct.h_sw = ch.h_sw;
  ct.rho = rho;
  ct.continuous = res.continuous();
  ct.levels = ct.continuous ? 0 : res.levels();
  return ct;
}

double combined_ct_gain(const ChannelSet& ch, const RVector& theta2) {
  return std::norm(ct_channel(ch, theta2));
}

namespace {

double relay_power_from_sinr(double sinr_dt, const ChannelSet& ch, const PhaseConfig& phases,
                             const Scenario& sc) {
  const double r_w = sinr_targets(sc).w;
  if (sinr_dt >= r_w) return 0.0;
  const double gain = combined_ct_gain(ch, phases.theta2);
  if (!(gain > 0.0)) {
    throw UncoverableError("relay_power: weak user below target and CT gain is zero");
  }
  return sc.noise_w() * (r_w - sinr_dt) / gain;
}

}  // namespace

double relay_power(const ChannelSet& ch, const PhaseConfig& phases, const CVector& w_s,
                   const CVector& w_w, const Scenario& sc) {
  const DtMetrics m = dt_metrics(ch, phases.theta1, w_s, w_w, noise_of(sc));
  return relay_power_from_sinr(m.sinr_w_dt, ch, phases, sc);
}

double relay_power_lifted(const ChannelSet& ch, const PhaseConfig& phases, const CMatrix& w_s,
                          const CMatrix& w_w, const Scenario& sc) {
  const CRowVector hw = effective_dt_channel(ch, phases.theta1, User::weak);
  const double sig = (hw * w_w * hw.adjoint())(0).real();
  const double intf = (hw * w_s * hw.adjoint())(0).real();
  return relay_power_from_sinr(sig / (intf + sc.noise_w()), ch, phases, sc);
}

CtPhaseResult solve_ct_phases_optimal(const CtQuadratics& ct, double p_s, double noise_w,
                                      const IlpOptions& opt) {
  if (ct.continuous) throw std::invalid_argument("solve_ct_phases_optimal: needs discrete phases");
  if (!(p_s > 0.0)) throw std::invalid_argument("solve_ct_phases_optimal: p_s must be positive");
  const double scale = p_s / noise_w;
  const QuadraticForm f{scale * ct.z, scale * ct.u, scale * std::norm(ct.h_sw)};
  IlpProblem ilp;
  ilp.elements = ct.elements();
  ilp.levels = ct.levels;
  ilp.constraints.push_back({psi_expression(f, ct.levels), ct.rho});
  const IlpResult r = solve_binary_feasibility(ilp, std::nullopt, opt);
  CtPhaseResult out;
  out.theta2 = phases_from_levels(r.levels, ct.levels);
  out.feasible = r.feasible;
  out.min_slack = r.min_slack;
  out.gain = ct.gain(out.theta2);
  return out;
}

CtRefinementResult solve_ct_phases_refinement(const CtQuadratics& ct, const RVector& theta2_init,
                                              const CtRefinementOptions& opt) {
  const int l = ct.elements();
  if (theta2_init.size() != l) throw std::invalid_argument("refinement: theta size mismatch");
  const PhaseResolution res{ct.continuous ? 0 : static_cast<int>(std::lround(std::log2(ct.levels)))};
  CtRefinementResult out;
  out.theta2 = theta2_init;
  CVector v = unit_phasors(-out.theta2);
  double gain = ct.gain(out.theta2);
  if (opt.record_trace) out.trace.push_back(gain);
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double start = gain;
    for (int m = 0; m < l; ++m) {
      const cplx alpha = (ct.z.row(m) * v)(0) - ct.z(m, m) * v(m) + ct.u(m);
      if (alpha != cplx(0.0, 0.0)) {
        out.theta2(m) = project_phase(-std::arg(alpha), res);
        v(m) = std::polar(1.0, -out.theta2(m));
      }
      if (opt.record_trace) out.trace.push_back(ct.gain(out.theta2));
    }
    gain = ct.gain(out.theta2);
    out.sweeps = sweep + 1;
    if (gain - start <= opt.rel_tol * std::max(std::abs(gain), std::numeric_limits<double>::min())) {
      break;
    }
  }
  out.gain = gain;
  return out;
}

}  // namespace riscnoma
