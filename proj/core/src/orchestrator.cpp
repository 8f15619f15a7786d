#include "riscnoma/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace riscnoma {

namespace {

struct VariantInfo {
  Variant v;
  std::string_view name;
  std::string_view long_name;
};

constexpr VariantInfo kVariants[] = {
    {Variant::aobo, "aobo", "AOBO"},
    {Variant::lcaobs, "lcaobs", "LCAOBS"},
    {Variant::conti, "conti", "Conti-RIS-CNOMA"},
    {Variant::random, "random", "Random-RIS-CNOMA"},
    {Variant::dt_lcaobs, "dt-lcaobs", "DT-LCAOBS"},
    {Variant::ct_lcaobs, "ct-lcaobs", "CT-LCAOBS"},
    {Variant::cnoma_noris, "cnoma-noris", "CNOMA-noRIS"},
    {Variant::ris_noma, "ris-noma", "RIS-NOMA"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view variant_name(Variant v) {
  for (const auto& info : kVariants) {
    if (info.v == v) return info.name;
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& info : kVariants) {
    if (key == info.name || key == lower(info.long_name)) return info.v;
  }
  return std::nullopt;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = [] {
    std::vector<Variant> out;
    for (const auto& info : kVariants) out.push_back(info.v);
    return out;
  }();
  return v;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

void AlgorithmConfig::validate() const {
  if (max_outer_iters < 1) throw std::invalid_argument("config: max_outer_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("config: rel_tol must be positive");
  if (max_restarts < 0) throw std::invalid_argument("config: max_restarts must be >= 0");
  if (!(dt.sdp_tol > 0.0) || !(dt.penalty_tol > 0.0) || dt.penalty_max_iters < 1) {
    throw std::invalid_argument("config: invalid DT options");
  }
  if (ct.max_sweeps < 1 || !(ct.rel_tol > 0.0)) {
    throw std::invalid_argument("config: invalid CT options");
  }
}

namespace {

enum class DtMethod { exact, penalty, fixed };
enum class CtMethod { exact, refinement, fixed };

struct Policy {
  DtMethod dt = DtMethod::penalty;
  CtMethod ct = CtMethod::refinement;
  TransmissionMode mode = TransmissionMode::cooperative;
  PhaseResolution res;
  bool random_dt = false;  // draw fixed DT phases at random
  bool random_ct = false;
  bool redraw_on_restart = true;
};

struct State {
  PhaseConfig phases;
  double p_s = 0.0;
  CVector w_s;
  CVector w_w;
  double power = 0.0;
};

constexpr double kSlackFloor = -1e-9;

double beam_power(const CVector& a, const CVector& b) { return a.squaredNorm() + b.squaredNorm(); }

CMatrix outer(const CVector& w) { return w * w.adjoint(); }

class OuterLoop {
 public:
  OuterLoop(const ChannelSet& ch, const Scenario& sc, const AlgorithmConfig& cfg, Policy pol)
      : ch_(ch), sc_(sc), cfg_(cfg), pol_(pol) {
    cfg_.validate();
    dto_ = cfg_.dt;
    dto_.mode = pol_.mode;
  }

  RunResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    const int l = ch_.l_ris();
    CounterRng rng = CounterRng(sc_.rng_seed).substream("phases");
    PhaseConfig base = PhaseConfig::zeros(l, pol_.res);
    if (pol_.random_dt) base.theta1 = random_phases(l, pol_.res, rng);
    if (pol_.random_ct) base.theta2 = random_phases(l, pol_.res, rng);

    for (int attempt = 0; attempt <= cfg_.max_restarts; ++attempt) {
      PhaseConfig ph = base;
      if (attempt > 0) {
        if (!pol_.redraw_on_restart) break;
        CounterRng r = rng.substream(static_cast<std::uint64_t>(attempt));
        ph.theta1 = random_phases(l, pol_.res, r);
        ph.theta2 = random_phases(l, pol_.res, r);
        rr_.restarts = attempt;
      }
      if (attempt_loop(ph)) break;
    }
    if (best_) {
      rr_.solution.w_s = best_->w_s;
      rr_.solution.w_w = best_->w_w;
      rr_.solution.lifted_ws = outer(best_->w_s);
      rr_.solution.lifted_ww = outer(best_->w_w);
      rr_.solution.p_s = best_->p_s;
      rr_.solution.phases = best_->phases;
      rr_.report = check_feasibility(ch_, rr_.solution, sc_, pol_.mode);
      if (!rr_.report.feasible) rr_.status = RunStatus::infeasible;
    } else {
      rr_.status = RunStatus::infeasible;
      rr_.solution.w_s = CVector::Zero(ch_.n_t());
      rr_.solution.w_w = CVector::Zero(ch_.n_t());
      rr_.solution.phases = PhaseConfig::zeros(l, pol_.res);
    }
    rr_.iterations = static_cast<int>(rr_.power_trace.size());
    rr_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rr_;
  }

 private:
  double initial_relay_power(const PhaseConfig& ph) const {
    if (pol_.mode != TransmissionMode::cooperative) return 0.0;
    const double gain = combined_ct_gain(ch_, ph.theta2);
    return gain > 0.0 ? sinr_targets(sc_).w * sc_.noise_w() / gain : 0.0;
  }

  BeamformingResult beamform(const PhaseConfig& ph, double p_s) {
    BeamformingResult bf = solve_active_beamforming(ch_, ph, p_s, sc_, dto_);
    if (bf.status == StageStatus::ok && bf.rank_fallback) ++rr_.rank_fallbacks;
    return bf;
  }

  DtQuadratics quadratics(const State& s) const {
    DtQuadratics q = build_dt_quadratics(ch_, outer(s.w_s), outer(s.w_w), s.p_s,
                                         s.phases.theta2, sc_, pol_.mode);
    q.continuous = pol_.res.continuous();
    q.levels = q.continuous ? 0 : pol_.res.levels();
    return q;
  }

  void update_dt_phases(State& s) {
    if (pol_.dt == DtMethod::fixed) return;
    const DtQuadratics q = quadratics(s);
    if (pol_.dt == DtMethod::exact) {
      const DtPhaseResult r = solve_dt_phases_optimal(q, dto_);
      if (r.min_slack >= kSlackFloor) s.phases.theta1 = r.theta1;
      return;
    }
    const DtPhaseResult r = solve_dt_phases_penalty(q, dto_);
    if (r.status != StageStatus::ok) return;
    if (r.projected_feasible) {
      s.phases.theta1 = r.theta1;
      return;
    }
    PhaseConfig trial = s.phases;
    trial.theta1 = r.theta1;
    const BeamformingResult bf = beamform(trial, s.p_s);
    if (bf.status == StageStatus::ok &&
        beam_power(bf.w_s, bf.w_w) <= beam_power(s.w_s, s.w_w)) {
      s.phases = trial;
      s.w_s = bf.w_s;
      s.w_w = bf.w_w;
    } else {
      ++rr_.projection_reverts;
    }
  }

  // Returns false when the CT link cannot cover the weak user.
  bool update_relay(State& s) {
    if (pol_.mode != TransmissionMode::cooperative) {
      s.p_s = 0.0;
      return true;
    }
    try {
      s.p_s = relay_power(ch_, s.phases, s.w_s, s.w_w, sc_);
      if (s.p_s > 0.0 && pol_.ct != CtMethod::fixed) {
        const double sinr1 = dt_metrics(ch_, s.phases.theta1, s.w_s, s.w_w, noise_of(sc_)).sinr_w_dt;
        const CtQuadratics ct = build_ct_quadratics(ch_, sinr_targets(sc_).w - sinr1, pol_.res);
        if (pol_.ct == CtMethod::exact) {
          const CtPhaseResult r = solve_ct_phases_optimal(ct, s.p_s, sc_.noise_w(), dto_.ilp);
          if (r.min_slack >= kSlackFloor && r.gain >= ct.gain(s.phases.theta2)) {
            s.phases.theta2 = r.theta2;
          }
        } else {
          s.phases.theta2 = solve_ct_phases_refinement(ct, s.phases.theta2, cfg_.ct).theta2;
        }
        s.p_s = relay_power(ch_, s.phases, s.w_s, s.w_w, sc_);
      }
    } catch (const UncoverableError&) {
      return false;
    }
    return true;
  }

  // One attempt from the given initial phases; false requests a restart.
  bool attempt_loop(const PhaseConfig& init) {
    State cur;
    cur.phases = init;
    cur.p_s = initial_relay_power(init);
    for (int it = 0; it < cfg_.max_outer_iters; ++it) {
      const BeamformingResult bf = beamform(cur.phases, cur.p_s);
      if (bf.status != StageStatus::ok) break;
      State next = cur;
      next.w_s = bf.w_s;
      next.w_w = bf.w_w;
      update_dt_phases(next);
      if (!update_relay(next)) break;
      next.power = beam_power(next.w_s, next.w_w) + next.p_s;
      if (!std::isfinite(next.power)) break;
      if (best_ && next.power > best_->power) {
        ++rr_.guarded_steps;
        rr_.status = RunStatus::converged;
        return true;
      }
      const double prev = best_ ? best_->power : 0.0;
      rr_.power_trace.push_back(next.power);
      best_ = next;
      cur = next;
      if (rr_.power_trace.size() >= 2 && prev - next.power <= cfg_.rel_tol * prev) {
        rr_.status = RunStatus::converged;
        return true;
      }
    }
    if (!best_) return false;
    rr_.status = rr_.power_trace.size() >= static_cast<std::size_t>(cfg_.max_outer_iters)
                     ? RunStatus::max_iters
                     : RunStatus::converged;
    return true;
  }

  const ChannelSet& ch_;
  const Scenario& sc_;
  AlgorithmConfig cfg_;
  Policy pol_;
  DtOptions dto_;
  RunResult rr_;
  std::optional<State> best_;
};

Policy policy_for(Variant v, const Scenario& sc) {
  Policy p;
  p.res = PhaseResolution{sc.bits};
  switch (v) {
    case Variant::aobo:
      p.dt = DtMethod::exact;
      p.ct = CtMethod::exact;
      break;
    case Variant::lcaobs:
      break;
    case Variant::conti:
      p.res = PhaseResolution::continuous_phases();
      break;
    case Variant::random:
      p.dt = DtMethod::fixed;
      p.ct = CtMethod::fixed;
      p.random_dt = p.random_ct = true;
      break;
    case Variant::dt_lcaobs:
      p.ct = CtMethod::fixed;
      p.random_ct = true;
      break;
    case Variant::ct_lcaobs:
      p.dt = DtMethod::fixed;
      p.random_dt = true;
      break;
    case Variant::cnoma_noris:
      p.dt = DtMethod::fixed;
      p.ct = CtMethod::fixed;
      p.redraw_on_restart = false;
      break;
    case Variant::ris_noma:
      p.ct = CtMethod::fixed;
      p.mode = TransmissionMode::direct;
      break;
  }
  return p;
}

}  // namespace

RunResult run_aobo(const ChannelSet& ch, const Scenario& sc, const AlgorithmConfig& cfg) {
  return OuterLoop(ch, sc, cfg, policy_for(Variant::aobo, sc)).run();
}

RunResult run_lcaobs(const ChannelSet& ch, const Scenario& sc, const AlgorithmConfig& cfg) {
  return OuterLoop(ch, sc, cfg, policy_for(Variant::lcaobs, sc)).run();
}

RunResult run_baseline(Variant variant, const ChannelSet& ch, const Scenario& sc,
                       const AlgorithmConfig& cfg) {
  if (variant == Variant::cnoma_noris) {
    const ChannelSet bare = ch.without_ris();
    return OuterLoop(bare, sc, cfg, policy_for(variant, sc)).run();
  }
  return OuterLoop(ch, sc, cfg, policy_for(variant, sc)).run();
}

RunResult run_variant(Variant variant, const ChannelSet& ch, const Scenario& sc,
                      const AlgorithmConfig& cfg) {
  switch (variant) {
    case Variant::aobo: return run_aobo(ch, sc, cfg);
    case Variant::lcaobs: return run_lcaobs(ch, sc, cfg);
    default: return run_baseline(variant, ch, sc, cfg);
  }
}

}  // namespace riscnoma
