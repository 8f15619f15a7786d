#include <gtest/gtest.h>

#include <cmath>

#include "riscnoma/ct_stage.hpp"
#include "riscnoma/eig.hpp"
#include "support.hpp"

namespace riscnoma {
namespace {

using testing::random_channel_set;
using testing::random_cvector;
using testing::unit_noise_scenario;

TEST(CombinedCtGain, NoReflectedPath) {
  CounterRng rng(61);
  ChannelSet ch = random_channel_set(2, 3, rng);
  ch.f_sr.setZero();
  EXPECT_NEAR(combined_ct_gain(ch, RVector::Constant(3, 1.0)), std::norm(ch.h_sw), 1e-15);
}

TEST(CombinedCtGain, AlignedSingleElement) {
  CounterRng rng(62);
  ChannelSet ch = random_channel_set(1, 1, rng);
  ch.gt_rw(0) = 0.5;
  ch.f_sr(0) = 2.0;
  ch.h_sw = 0.25;
  EXPECT_NEAR(combined_ct_gain(ch, RVector::Zero(1)), std::pow(1.0 + 0.25, 2), 1e-15);
}

TEST(CombinedCtGain, MatchesQuadraticExpansion) {
  CounterRng rng(63);
  const ChannelSet ch = random_channel_set(2, 5, rng);
  const CtQuadratics ct = build_ct_quadratics(ch, 0.0, PhaseResolution{2});
  for (int i = 0; i < 10; ++i) {
    const RVector th = random_phases(5, PhaseResolution{2}, rng);
    EXPECT_NEAR(ct.gain(th), combined_ct_gain(ch, th), 1e-10);
  }
  EXPECT_LT(hermitian_defect(ct.z), 1e-15);
  const RVector ev = descending_eigenvalues(ct.z);
  EXPECT_LE(std::abs(ev(1)), 1e-9 * ev(0));
}

PhaseConfig zero_phases(int l) { return PhaseConfig::zeros(l, PhaseResolution{1}); }

TEST(RelayPower, ZeroWhenDtCoversWeakUser) {
  CounterRng rng(64);
  const Scenario sc = unit_noise_scenario(2, 3, 1);
  const ChannelSet ch = random_channel_set(2, 3, rng);
  const CVector ww = 100.0 * ch.h_bw.normalized();
  EXPECT_EQ(relay_power(ch, zero_phases(3), CVector::Zero(2), ww, sc), 0.0);
}

TEST(RelayPower, HandEvaluation) {
  // sigma_w = 1, r_w = 3, SINR_dt = 1, gain = 0.5 -> 4.
  Scenario sc = unit_noise_scenario(1, 1, 1);
  sc.qos_bits_w = 1.0;  // r_w = 2^(1/0.5) - 1 = 3
  ChannelSet ch;
  ch.h_bs = CVector::Zero(1);
  ch.h_bw = CVector::Ones(1);
  ch.f_br = CMatrix::Zero(1, 1);
  ch.g_rs = ch.g_rw = ch.f_sr = ch.gt_rw = CVector::Zero(1);
  ch.h_sw = std::sqrt(0.5);
  const CVector ww = CVector::Ones(1);  // SINR_dt = 1 / (0 + 1)
  EXPECT_NEAR(relay_power(ch, zero_phases(1), CVector::Zero(1), ww, sc), 4.0, 1e-12);
  ch.h_sw = 1.0;  // doubling the gain halves P_S
  EXPECT_NEAR(relay_power(ch, zero_phases(1), CVector::Zero(1), ww, sc), 2.0, 1e-12);
}

TEST(RelayPower, ClosesWeakTargetExactly) {
  CounterRng rng(65);
  const Scenario sc = unit_noise_scenario(2, 4, 2);
  for (int i = 0; i < 50; ++i) {
    const ChannelSet ch = random_channel_set(2, 4, rng);
    const PhaseConfig ph{random_phases(4, PhaseResolution{2}, rng),
                         random_phases(4, PhaseResolution{2}, rng), PhaseResolution{2}};
    const CVector ws = random_cvector(2, rng), ww = random_cvector(2, rng);
    const double p_s = relay_power(ch, ph, ws, ww, sc);
    const double sinr_dt = dt_metrics(ch, ph.theta1, ws, ww, noise_of(sc)).sinr_w_dt;
    const double r_w = sinr_targets(sc).w;
    if (p_s > 0.0) {
      EXPECT_NEAR(sinr_dt + ct_sinr(ch, ph.theta2, p_s, sc.noise_w()), r_w, 1e-9);
    } else {
      EXPECT_GE(sinr_dt, r_w);
    }
    EXPECT_NEAR(relay_power_lifted(ch, ph, ws * ws.adjoint(), ww * ww.adjoint(), sc), p_s,
                1e-9 * std::max(1.0, p_s));
  }
}

TEST(RelayPower, UncoverableWhenGainIsZero) {
  Scenario sc = unit_noise_scenario(1, 1, 1);
  ChannelSet ch;
  ch.h_bs = ch.h_bw = CVector::Zero(1);
  ch.f_br = CMatrix::Zero(1, 1);
  ch.g_rs = ch.g_rw = ch.f_sr = ch.gt_rw = CVector::Zero(1);
  ch.h_sw = 0.0;
  EXPECT_THROW(relay_power(ch, zero_phases(1), CVector::Zero(1), CVector::Zero(1), sc),
               UncoverableError);
}

// Independent enumeration of the CT constraint P (gain) / sigma >= rho.
struct CtOracle {
  double best_gain = 0.0;
  bool feasible = false;
};

CtOracle enumerate_ct(const ChannelSet& ch, double p_s, double rho, int q) {
  const int l = ch.l_ris();
  std::vector<int> s(static_cast<std::size_t>(l), 0);
  CtOracle o;
  for (;;) {
    const double g = combined_ct_gain(ch, phases_from_levels(s, q));
    o.best_gain = std::max(o.best_gain, g);
    if (p_s * g >= rho) o.feasible = true;
    int i = l - 1;
    while (i >= 0 && ++s[static_cast<std::size_t>(i)] == q) s[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return o;
}

TEST(CtPhasesOptimal, VerdictMatchesEnumeration) {
  CounterRng rng(66);
  int feasible = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ChannelSet ch = random_channel_set(2, 3, rng);
    const double rho = 1.0 + 4.0 * rng.uniform();
    const CtQuadratics ct = build_ct_quadratics(ch, rho, PhaseResolution{1});
    const double p_s = rho / (ct.gain_upper_bound() * (0.3 + 0.7 * rng.uniform()));
    const CtOracle o = enumerate_ct(ch, p_s, rho, 2);
    const CtPhaseResult r = solve_ct_phases_optimal(ct, p_s, 1.0);
    if (std::abs(p_s * o.best_gain - rho) < 1e-9 * rho) continue;
    EXPECT_EQ(r.feasible, o.feasible) << "trial " << trial;
    if (r.feasible) {
      ++feasible;
      EXPECT_GE(p_s * r.gain, rho * (1.0 - 1e-12));
    }
    EXPECT_NEAR(r.gain, combined_ct_gain(ch, r.theta2), 1e-12);
  }
  EXPECT_GT(feasible, 0);
  EXPECT_LT(feasible, 30);
}

TEST(CtPhasesOptimal, NonPositiveTargetIsTrivial) {
  CounterRng rng(67);
  const ChannelSet ch = random_channel_set(2, 3, rng);
  const CtQuadratics ct = build_ct_quadratics(ch, -1.0, PhaseResolution{1});
  EXPECT_TRUE(solve_ct_phases_optimal(ct, 1.0, 1.0).feasible);
  EXPECT_THROW(solve_ct_phases_optimal(ct, 0.0, 1.0), std::invalid_argument);
}

TEST(CtRefinement, SingleElementAlignsWithU) {
  CounterRng rng(68);
  for (int bits : {1, 2, 3}) {
    const ChannelSet ch = random_channel_set(1, 1, rng);
    const CtQuadratics ct = build_ct_quadratics(ch, 0.0, PhaseResolution{bits});
    const CtRefinementResult r = solve_ct_phases_refinement(ct, RVector::Zero(1));
    // v = e^{-j theta}: 2 Re(conj(v) u) is maximal at theta = -arg(u) projected.
    const double want = project_phase(-std::arg(ct.u(0)), PhaseResolution{bits});
    EXPECT_NEAR(r.theta2(0), want, 1e-12);
    EXPECT_NEAR(r.gain, brute_force_phase_search(ct.gain_form(), 1 << bits, 1).value, 1e-12);
  }
}

TEST(CtRefinement, SeparableCaseIsGloballyOptimal) {
  CounterRng rng(69);
  CtQuadratics ct;
  ct.z = CMatrix::Zero(4, 4);
  ct.u = random_cvector(4, rng);
  ct.h_sw = 0.3;
  ct.levels = 4;
  const CtRefinementResult r = solve_ct_phases_refinement(ct, RVector::Zero(4));
  EXPECT_LE(r.sweeps, 2);
  EXPECT_NEAR(r.gain, brute_force_phase_search(ct.gain_form(), 4, 4).value, 1e-12);
}

TEST(CtRefinement, BoundedByExhaustive) {
  CounterRng rng(70);
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelSet ch = random_channel_set(2, 4, rng);
    const CtQuadratics ct = build_ct_quadratics(ch, 0.0, PhaseResolution{2});
    const CtRefinementResult r = solve_ct_phases_refinement(ct, RVector::Zero(4));
    const double best = brute_force_phase_search(ct.gain_form(), 4, 4).value;
    EXPECT_LE(r.gain, best + 1e-12);
    RecordProperty("gap_" + std::to_string(trial), std::to_string((best - r.gain) / best));
  }
}

TEST(CtRefinement, BeatsRandomPhaseVectors) {
  CounterRng rng(70);
  const ChannelSet ch = random_channel_set(2, 4, rng);
  const CtQuadratics ct = build_ct_quadratics(ch, 0.0, PhaseResolution{2});
  const CtRefinementResult r = solve_ct_phases_refinement(ct, RVector::Zero(4));
  for (int i = 0; i < 100; ++i) {
    EXPECT_GE(r.gain, ct.gain(random_phases(4, PhaseResolution{2}, rng)) - 1e-12);
  }
}

TEST(CtRefinement, MonotoneAndBoundedPerUpdate) {
  CounterRng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 2 + static_cast<int>(rng.below(10));
    const ChannelSet ch = random_channel_set(2, l, rng);
    const PhaseResolution res{1 + static_cast<int>(rng.below(3))};
    const CtQuadratics ct = build_ct_quadratics(ch, 0.0, res);
    CtRefinementOptions opt;
    opt.record_trace = true;
    const CtRefinementResult r = solve_ct_phases_refinement(ct, random_phases(l, res, rng), opt);
    const double bound = ct.gain_upper_bound();
    ASSERT_GE(r.trace.size(), static_cast<std::size_t>(l + 1));
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      EXPECT_LE(r.trace[i], bound);
      if (i > 0) {
        EXPECT_GE(r.trace[i], r.trace[i - 1]);
      }
    }
    EXPECT_TRUE(all_in_alphabet(r.theta2, res));
  }
}

TEST(CtRefinement, ContinuousPhasesReachCoherentSum) {
  // Rank-one Z with h_sw = 0: the coherent optimum is (sum |a_m|)^2.
  CounterRng rng(72);
  ChannelSet ch = random_channel_set(2, 6, rng);
  ch.h_sw = 0.0;
  const CtQuadratics ct = build_ct_quadratics(ch, 0.0, PhaseResolution::continuous_phases());
  const CtRefinementResult r = solve_ct_phases_refinement(ct, RVector::Zero(6));
  const double coherent = std::pow(ch.gt_rw.cwiseAbs().cwiseProduct(ch.f_sr.cwiseAbs()).sum(), 2);
  EXPECT_NEAR(r.gain, coherent, 1e-9 * coherent);
}

}  // namespace
}  // namespace riscnoma
