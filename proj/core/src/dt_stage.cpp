#include "riscnoma/dt_stage.hpp"

#include <cmath>
#include <limits>

#include "riscnoma/eig.hpp"

namespace riscnoma {

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::ok: return "ok";
    case StageStatus::infeasible: return "infeasible";
    case StageStatus::solver_failure: return "solver_failure";
  }
  return "unknown";
}

double residual_weak_target(const ChannelSet& ch, const PhaseConfig& phases, double p_s,
                            const Scenario& sc, TransmissionMode mode) {
  const double r_w = sinr_targets(sc, mode).w;
  if (mode == TransmissionMode::direct || p_s == 0.0) return r_w;
  return r_w - p_s * std::norm(ct_channel(ch, phases.theta2)) / sc.noise_w();
}

namespace {

bool usable(const SdpSolution& s, const DtOptions& opt) {
  return s.optimal() || (s.status != SdpStatus::infeasible && s.accurate_to(opt.sdp_accept));
}

SdpSolution solve_relaxation(const SdpProblem& p, const DtOptions& opt) {
  SdpOptions so;
  so.tol = opt.sdp_tol;
  return solve_sdp(p, so);
}

}  // namespace

BeamformingResult solve_active_beamforming(const ChannelSet& ch, const PhaseConfig& phases,
                                           double p_s, const Scenario& sc, const DtOptions& opt) {
  const SinrTargets t = sinr_targets(sc, opt.mode);
  const NoisePowers noise = noise_of(sc);
  const int n = ch.n_t();
  BeamformingResult out;
  out.eta = residual_weak_target(ch, phases, p_s, sc, opt.mode);
  out.w_s = CVector::Zero(n);
  out.w_w = CVector::Zero(n);
  out.lifted_ws = CMatrix::Zero(n, n);
  out.lifted_ww = CMatrix::Zero(n, n);
  const double eta = std::max(0.0, out.eta);
  if (t.s <= 0.0 && t.w <= 0.0) {
    out.status = StageStatus::ok;
    return out;
  }

  const CRowVector hs = effective_dt_channel(ch, phases.theta1, User::strong);
  const CRowVector hw = effective_dt_channel(ch, phases.theta1, User::weak);
  const CMatrix gram_s = hs.adjoint() * hs / noise.s;
  const CMatrix gram_w = hw.adjoint() * hw / noise.w;
  const CMatrix zero = CMatrix::Zero(n, n);

  SdpProblem p;
  p.block_sizes = {n, n};
  p.cost = {CMatrix::Identity(n, n), CMatrix::Identity(n, n)};
  if (t.s > 0.0) p.constraints.push_back({{gram_s, zero}, Sense::geq, t.s});
  if (t.w > 0.0) p.constraints.push_back({{CMatrix(-t.w * gram_s), gram_s}, Sense::geq, t.w});
  if (eta > 0.0) p.constraints.push_back({{CMatrix(-eta * gram_w), gram_w}, Sense::geq, eta});

  const SdpSolution sol = solve_relaxation(p, opt);
  if (sol.status == SdpStatus::infeasible) {
    out.status = StageStatus::infeasible;
    return out;
  }
  if (!usable(sol, opt)) {
    out.status = StageStatus::solver_failure;
    return out;
  }
  out.lifted_ws = sol.x[0];
  out.lifted_ww = sol.x[1];
  out.sdr_objective = sol.primal_objective;

  auto principal = [](const CMatrix& w, double& ratio) {
    const RVector ev = descending_eigenvalues(w);
    ratio = ev(0) > 0.0 ? std::max(0.0, ev(1)) / ev(0) : 0.0;
    return max_eigpair(w, 1e-8).vector;
  };
  const CVector u_s = principal(out.lifted_ws, out.rank_ratio_s);
  const CVector u_w = principal(out.lifted_ww, out.rank_ratio_w);
  out.rank_fallback = out.rank_ratio_s > kRankOneRatio || out.rank_ratio_w > kRankOneRatio;

  // Smallest powers along the extracted directions.
  const double a_ss = std::norm((hs * u_s)(0));
  const double a_ws = std::norm((hw * u_s)(0));
  const double a_sw = std::norm((hs * u_w)(0));
  const double a_ww = std::norm((hw * u_w)(0));
  double pow_s = 0.0;
  if (t.s > 0.0) {
    if (!(a_ss > 0.0)) {
      out.status = StageStatus::solver_failure;
      return out;
    }
    pow_s = t.s * noise.s / a_ss;
  }
  double pow_w = 0.0;
  if (t.w > 0.0) {
    if (!(a_sw > 0.0)) {
      out.status = StageStatus::solver_failure;
      return out;
    }
    pow_w = t.w * (pow_s * a_ss + noise.s) / a_sw;
  }
  if (eta > 0.0) {
    if (!(a_ww > 0.0)) {
      out.status = StageStatus::solver_failure;
      return out;
    }
    pow_w = std::max(pow_w, eta * (pow_s * a_ws + noise.w) / a_ww);
  }
  out.w_s = std::sqrt(pow_s) * u_s;
  out.w_w = std::sqrt(pow_w) * u_w;
  out.status = StageStatus::ok;
  return out;
}

DtQuadratics build_dt_quadratics(const ChannelSet& ch, const CMatrix& w_s, const CMatrix& w_w,
                                 double p_s, const RVector& theta2, const Scenario& sc,
                                 TransmissionMode mode) {
  const int n = ch.n_t();
  const int l = ch.l_ris();
  if (w_s.rows() != n || w_s.cols() != n || w_w.rows() != n || w_w.cols() != n) {
    throw std::invalid_argument("build_dt_quadratics: lifted beamformers must be N_T x N_T");
  }
  if (hermitian_defect(w_s) > 1e-9 * std::max(1.0, w_s.cwiseAbs().maxCoeff()) ||
      hermitian_defect(w_w) > 1e-9 * std::max(1.0, w_w.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("build_dt_quadratics: lifted beamformers must be Hermitian");
  }
  DtQuadratics q;
  const CMatrix* beams[2] = {&w_s, &w_w};
  const CVector* g[2] = {&ch.g_rs, &ch.g_rw};
  const CVector* h[2] = {&ch.h_bs, &ch.h_bw};
  for (int i = 0; i < 2; ++i) {
    const CMatrix e = g[i]->conjugate().asDiagonal() * ch.f_br;  // L x N_T
    for (int k = 0; k < 2; ++k) {
      const CMatrix& w = *beams[k];
      CMatrix x = e * w * e.adjoint();
      q.x[i][k] = 0.5 * (x + x.adjoint());
      q.y[i][k] = e * w * *h[i];
      q.c[i][k] = (h[i]->adjoint() * w * *h[i])(0).real();
    }
  }
  const SinrTargets t = sinr_targets(sc, mode);
  q.r_s = t.s;
  q.r_w = t.w;
  q.sigma_s = sc.noise_s();
  q.sigma_w = sc.noise_w();
  q.eta = t.w;
  if (mode == TransmissionMode::cooperative && p_s > 0.0) {
    if (theta2.size() != l) throw std::invalid_argument("build_dt_quadratics: theta2 size");
    q.eta -= p_s * std::norm(ct_channel(ch, theta2)) / q.sigma_w;
  }
  q.alpha1 = q.r_w * q.c[0][0] - q.c[0][1] + q.r_w * q.sigma_s;
  q.alpha2 = q.eta * q.c[1][0] - q.c[1][1] + q.eta * q.sigma_w;
  const PhaseResolution res{sc.bits};
  q.continuous = res.continuous();
  q.levels = q.continuous ? 0 : res.levels();
  return q;
}

std::vector<QuadraticForm> DtQuadratics::constraint_forms() const {
  std::vector<QuadraticForm> f;
  if (r_s > 0.0) f.push_back({x[0][0] / sigma_s, y[0][0] / sigma_s, c[0][0] / sigma_s});
  if (r_w > 0.0) {
    f.push_back({(x[0][1] - r_w * x[0][0]) / sigma_s, (y[0][1] - r_w * y[0][0]) / sigma_s,
                 (c[0][1] - r_w * c[0][0]) / sigma_s});
  }
  if (eta > 0.0) {
    f.push_back({(x[1][1] - eta * x[1][0]) / sigma_w, (y[1][1] - eta * y[1][0]) / sigma_w,
                 (c[1][1] - eta * c[1][0]) / sigma_w});
  }
  return f;
}

std::vector<double> DtQuadratics::constraint_rhs() const {
  std::vector<double> r;
  if (r_s > 0.0) r.push_back(r_s);
  if (r_w > 0.0) r.push_back(r_w);
  if (eta > 0.0) r.push_back(eta);
  return r;
}

double DtQuadratics::min_normalized_slack(const RVector& theta1) const {
  const auto forms = constraint_forms();
  const auto rhs = constraint_rhs();
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const double constant = forms[i].c + forms[i].a.diagonal().real().sum();
    s = std::min(s, (evaluate(forms[i], theta1) - rhs[i]) / std::max(1.0, std::abs(rhs[i] - constant)));
  }
  return s;
}

CMatrix lifted_form(const QuadraticForm& f) {
  const Eigen::Index l = f.b.size();
  CMatrix r(l + 1, l + 1);
  r.topLeftCorner(l, l) = f.a;
  r.topRightCorner(l, 1) = f.b;
  r.bottomLeftCorner(1, l) = f.b.adjoint();
  r(l, l) = f.c;
  return 0.5 * (r + r.adjoint());
}

DtPhaseResult solve_dt_phases_optimal(const DtQuadratics& q, const DtOptions& opt) {
  if (q.continuous) throw std::invalid_argument("solve_dt_phases_optimal: needs discrete phases");
  const int l = q.elements();
  const auto forms = q.constraint_forms();
  const auto rhs = q.constraint_rhs();
  IlpProblem ilp;
  ilp.elements = l;
  ilp.levels = q.levels;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    ilp.constraints.push_back({psi_expression(forms[i], q.levels), rhs[i]});
  }
  const IlpResult r = solve_binary_feasibility(ilp, std::nullopt, opt.ilp);
  DtPhaseResult out;
  out.theta1 = phases_from_levels(r.levels, q.levels);
  out.min_slack = forms.empty() ? std::numeric_limits<double>::infinity() : r.min_slack;
  out.status = r.feasible ? StageStatus::ok : StageStatus::infeasible;
  return out;
}

DtPhaseResult solve_dt_phases_penalty(const DtQuadratics& q, const DtOptions& opt) {
  const int l = q.elements();
  const PhaseResolution res{q.continuous ? 0 : static_cast<int>(std::lround(std::log2(q.levels)))};
  const auto forms = q.constraint_forms();
  const auto rhs = q.constraint_rhs();
  DtPhaseResult out;
  if (forms.empty()) {
    out.theta1 = RVector::Zero(l);
    out.min_slack = std::numeric_limits<double>::infinity();
    out.status = StageStatus::ok;
    return out;
  }

  SdpProblem p;
  p.block_sizes = {l + 1};
  p.cost = {CMatrix::Identity(l + 1, l + 1)};
  for (std::size_t i = 0; i < forms.size(); ++i) {
    p.constraints.push_back({{lifted_form(forms[i])}, Sense::geq, rhs[i]});
  }
  for (int m = 0; m <= l; ++m) p.fixed_diagonals.push_back({0, m, 1.0});

  auto penalty = [](const CMatrix& v) { return v.trace().real() - max_eigpair(v, 1e-8).value; };

  SdpSolution sol = solve_relaxation(p, opt);
  ++out.sdp_solves;
  if (sol.status == SdpStatus::infeasible) {
    out.status = StageStatus::infeasible;
    out.theta1 = RVector::Zero(l);
    return out;
  }
  if (!usable(sol, opt)) {
    out.status = StageStatus::solver_failure;
    out.theta1 = RVector::Zero(l);
    return out;
  }
  CMatrix best = sol.x[0];
  double best_pen = penalty(best);
  out.penalty_trace.push_back(best_pen);

  for (int it = 0; it < opt.penalty_max_iters; ++it) {
    const CVector v = max_eigpair(best, 1e-8).vector;
    p.cost[0] = CMatrix::Identity(l + 1, l + 1) - v * v.adjoint();
    p.cost[0] = 0.5 * (p.cost[0] + p.cost[0].adjoint());
    sol = solve_relaxation(p, opt);
    ++out.sdp_solves;
    if (!usable(sol, opt)) break;
    const double pen = penalty(sol.x[0]);
    if (!(pen <= best_pen)) break;  // keep the best iterate
    const double decrease = best_pen - pen;
    best = sol.x[0];
    best_pen = pen;
    out.penalty_trace.push_back(pen);
    if (decrease < opt.penalty_tol) break;
  }

  const CVector v = max_eigpair(best, 1e-8).vector;
  out.theta1.resize(l);
  for (int m = 0; m < l; ++m) out.theta1(m) = project_phase(-std::arg(v(m) * std::conj(v(l))), res);
  out.min_slack = q.min_normalized_slack(out.theta1);
  out.projected_feasible = out.min_slack >= -1e-9;
  out.status = StageStatus::ok;
  return out;
}

}  // namespace riscnoma
