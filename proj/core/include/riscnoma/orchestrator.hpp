#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riscnoma/ct_stage.hpp"
#include "riscnoma/dt_stage.hpp"
#include "riscnoma/scenario.hpp"
#include "riscnoma/signal_model.hpp"

namespace riscnoma {

enum class Variant {
  aobo,
  lcaobs,
  conti,        // LCAOBS with continuous phases
  random,       // random discrete phases, beamforming and relay power only
  dt_lcaobs,    // optimized DT phases, random CT phases
  ct_lcaobs,    // random DT phases, optimized CT phases
  cnoma_noris,  // cooperative NOMA without the RIS
  ris_noma,     // single-stage non-cooperative NOMA with RIS
};

std::string_view variant_name(Variant v);
/// Case-insensitive; accepts the short names and the long scheme names
/// (e.g. "Random-RIS-CNOMA").
std::optional<Variant> parse_variant(std::string_view name);
const std::vector<Variant>& all_variants();

enum class RunStatus { converged, max_iters, infeasible };
std::string_view to_string(RunStatus s);

struct AlgorithmConfig {
  int max_outer_iters = 20;
  double rel_tol = 1e-4;
  Variant variant = Variant::lcaobs;
  int max_restarts = 3;
  DtOptions dt;
  CtRefinementOptions ct;

  /// Throws std::invalid_argument on non-positive tolerances or limits.
  void validate() const;
};

struct RunResult {
  JointSolution solution;
  RateReport report;
  std::vector<double> power_trace;  // total power after each outer iteration (watts)
  int iterations = 0;
  RunStatus status = RunStatus::infeasible;
  int rank_fallbacks = 0;
  int restarts = 0;
  int projection_reverts = 0;  // penalty projections rejected after re-solving beamforming
  int guarded_steps = 0;       // iterations discarded for not decreasing the power
  double wall_time_s = 0.0;

  double total_power() const { return riscnoma::total_power(solution); }
};

RunResult run_aobo(const ChannelSet& ch, const Scenario& sc, const AlgorithmConfig& cfg = {});
RunResult run_lcaobs(const ChannelSet& ch, const Scenario& sc, const AlgorithmConfig& cfg = {});
RunResult run_baseline(Variant variant, const ChannelSet& ch, const Scenario& sc,
                       const AlgorithmConfig& cfg = {});
/// Dispatches on `variant`.
RunResult run_variant(Variant variant, const ChannelSet& ch, const Scenario& sc,
                      const AlgorithmConfig& cfg = {});

}  // namespace riscnoma
