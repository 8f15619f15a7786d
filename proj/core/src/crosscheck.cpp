#include "riscnoma/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "riscnoma/ct_stage.hpp"
#include "riscnoma/dt_stage.hpp"
#include "riscnoma/experiment.hpp"
#include "riscnoma/phases.hpp"

namespace riscnoma {

namespace {

constexpr double kValueTol = 1e-9;

class Tally {
 public:
  explicit Tally(std::string name) { check_.name = std::move(name); }

  void record(int instance, double got, double want) {
    ++check_.total;
    const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
    if (err <= kValueTol) {
      ++check_.passed;
      return;
    }
    if (err > worst_) {
      worst_ = err;
      char buf[160];
      std::snprintf(buf, sizeof buf, "instance %d: %.12g vs %.12g", instance, got, want);
      check_.worst = buf;
    }
  }

  void record(int instance, bool agree) {
    ++check_.total;
    if (agree) {
      ++check_.passed;
    } else if (check_.worst.empty()) {
      check_.worst = "instance " + std::to_string(instance);
    }
  }

  CrossCheck result() const { return check_; }

 private:
  CrossCheck check_;
  double worst_ = 0.0;
};

bool same_verdict(bool bb_feasible, double bb_slack, double oracle_slack) {
  if (std::abs(oracle_slack) <= kValueTol || std::abs(bb_slack) <= kValueTol) return true;
  return bb_feasible == (oracle_slack >= 0.0);
}

double max_identity_error(const std::vector<QuadraticForm>& forms, const std::vector<int>& levels,
                          int q) {
  const OneHotAssignment x = encode_levels(levels, q);
  const RVector theta = decode_phases(x, q);
  double err = 0.0;
  for (const auto& f : forms) {
    const double direct = evaluate(f, theta);
    err = std::max(err, std::abs(psi(f, x, q) - direct) / std::max(1.0, std::abs(direct)));
  }
  return err;
}

}  // namespace

bool CrossCheckReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CrossCheck& c) { return c.ok(); });
}

CrossCheckReport run_cross_checks(const Scenario& base, int instances, std::uint64_t base_seed,
                                  const IlpOptions& ilp) {
  Tally dt_verdict("dt verdict"), dt_slack("dt max-min slack"), dt_identity("dt indicator identity");
  Tally ct_verdict("ct verdict"), ct_slack("ct max-min slack"), ct_gain("ct max gain");
  const PhaseResolution res{base.bits};
  const int q = res.levels();
  const int l = base.l_ris;

  for (int i = 0; i < instances; ++i) {
    Scenario sc = base;
    sc.rng_seed = trial_seed(base_seed, i);
    const ChannelSet ch = generate_channels(sc);
    CounterRng rng = CounterRng(sc.rng_seed).substream("crosscheck");
    PhaseConfig phases{random_phases(l, res, rng), random_phases(l, res, rng), res};

    // Relay power covering a random share of the weak target.
    const double r_w = sinr_targets(sc).w;
    const double gain = combined_ct_gain(ch, phases.theta2);
    const double p_s = gain > 0.0 ? rng.uniform() * r_w * sc.noise_w() / gain : 0.0;
    const BeamformingResult bf = solve_active_beamforming(ch, phases, p_s, sc);
    if (bf.status == StageStatus::ok) {
      // Shrinking the beams makes some instances infeasible.
      const double shrink = 0.6 + 0.5 * rng.uniform();
      const DtQuadratics dq = build_dt_quadratics(ch, shrink * bf.lifted_ws, shrink * bf.lifted_ww,
                                                  p_s, phases.theta2, sc);
      const auto forms = dq.constraint_forms();
      const auto rhs = dq.constraint_rhs();
      IlpProblem prob;
      prob.elements = l;
      prob.levels = q;
      for (std::size_t k = 0; k < forms.size(); ++k) {
        prob.constraints.push_back({psi_expression(forms[k], q), rhs[k]});
      }
      const IlpResult bb = solve_binary_feasibility(prob, std::nullopt, ilp);
      const BruteForceResult bf_dt =
          brute_force_phase_search(forms, rhs, q, l, SearchMode::feasibility_set);
      dt_verdict.record(i, same_verdict(bb.feasible, bb.min_slack, bf_dt.value));
      dt_slack.record(i, bb.min_slack, bf_dt.value);
      dt_identity.record(i, max_identity_error(forms, bb.levels, q) <= kValueTol);
    }

    // CT program at a relay power around the one met by the random phases.
    const DtMetrics m = dt_metrics(ch, phases.theta1, bf.w_s, bf.w_w, noise_of(sc));
    const double rho = r_w - m.sinr_w_dt;
    const CtQuadratics ct = build_ct_quadratics(ch, rho, res);
    const double p_ct = (gain > 0.0 ? std::max(rho, 0.1 * r_w) * sc.noise_w() / gain : 1.0) *
                        (0.5 + rng.uniform());
    const double scale = p_ct / sc.noise_w();
    const QuadraticForm f{scale * ct.z, scale * ct.u, scale * std::norm(ct.h_sw)};
    IlpProblem prob;
    prob.elements = l;
    prob.levels = q;
    prob.constraints.push_back({psi_expression(f, q), rho});
    const IlpResult bb = solve_binary_feasibility(prob, std::nullopt, ilp);
    const BruteForceResult bf_ct =
        brute_force_phase_search({f}, {rho}, q, l, SearchMode::feasibility_set);
    ct_verdict.record(i, same_verdict(bb.feasible, bb.min_slack, bf_ct.value));
    ct_slack.record(i, bb.min_slack, bf_ct.value);

    const IlpResult best = solve_binary_feasibility(prob, psi_expression(ct.gain_form(), q), ilp);
    if (best.feasible) {
      ct_gain.record(i, best.objective, brute_force_phase_search(ct.gain_form(), q, l).value);
    }
  }

  CrossCheckReport report;
  for (const Tally* t : {&dt_verdict, &dt_slack, &dt_identity, &ct_verdict, &ct_slack, &ct_gain}) {
    report.checks.push_back(t->result());
  }
  return report;
}

}  // namespace riscnoma
