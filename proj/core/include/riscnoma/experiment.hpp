#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riscnoma/config.hpp"
#include "riscnoma/orchestrator.hpp"
#include "riscnoma/scenario.hpp"

namespace riscnoma {

enum class SweepAxis { iterations, bits, l_ris, r_w_min, x_ris, x_weak };
std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view name);

/// Scenario with the swept parameter set to `value`. The iterations axis
/// leaves the scenario unchanged.
Scenario apply_axis(Scenario sc, SweepAxis axis, double value);

struct ExperimentSpec {
  Scenario scenario;
  SweepAxis axis = SweepAxis::r_w_min;
  std::vector<double> axis_values;
  std::vector<Variant> variants{Variant::lcaobs};
  int n_trials = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path output;  // empty: caller decides
  AlgorithmConfig algorithm;
  int workers = 0;  // 0: one per hardware thread

  /// Throws std::invalid_argument on an empty or unsorted axis, or n_trials < 1.
  void validate() const;
};

/// Reads an experiment from a flat config. Keys: axis, axis_values (list) or
/// axis_range (start:stop:step), variants, n_trials, base_seed, output,
/// workers, max_outer_iters, rel_tol, plus any scenario key.
ExperimentSpec experiment_from_config(const KeyValueConfig& cfg);

/// Channel seed of a trial; identical across axis values and variants.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

struct TrialRecord {
  Variant variant = Variant::lcaobs;
  double axis_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double total_power_w = 0.0;
  double p_s_w = 0.0;
  int iterations = 0;
  RunStatus status = RunStatus::infeasible;
  int rank_fallbacks = 0;
};

struct AggregateRecord {
  Variant variant = Variant::lcaobs;
  double axis_value = 0.0;
  int n_trials = 0;
  int n_feasible = 0;
  double mean_power_w = 0.0;
  double mean_p_s_w = 0.0;
  double mean_iterations = 0.0;
  int rank_fallbacks = 0;
  double ci95_w = 0.0;  // half-width of the normal-approximation interval on the mean power
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  // ordered by variant, axis value, trial
  std::vector<AggregateRecord> aggregates;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "row_type,variant,axis,axis_value,trial,seed,total_power_w,total_power_dbm,p_s_w,iterations,"
    "status,rank_fallbacks,ci95_w";

/// %.9g formatting.
std::string format_number(double v);

void write_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result);
/// Throws std::runtime_error when the file cannot be written.
void write_csv_file(const std::filesystem::path& path, const ExperimentSpec& spec,
                    const ExperimentResult& result);

}  // namespace riscnoma
