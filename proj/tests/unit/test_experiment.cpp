#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "riscnoma/experiment.hpp"

namespace riscnoma {
namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.scenario.n_t = 2;
  spec.scenario.l_ris = 3;
  spec.scenario.bits = 1;
  spec.axis = SweepAxis::r_w_min;
  spec.axis_values = {1.0};
  spec.variants = {Variant::lcaobs};
  spec.n_trials = 1;
  spec.workers = 1;
  return spec;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string to_csv(const ExperimentSpec& spec, const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, spec, r);
  return out.str();
}

TEST(Experiment, OneTrialOneValue) {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult r = run_experiment(spec);
  ASSERT_EQ(r.trials.size(), 1u);
  ASSERT_EQ(r.aggregates.size(), 1u);
  const auto lines = lines_of(to_csv(spec, r));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kCsvHeader);
  EXPECT_EQ(lines[1].rfind("trial,lcaobs,r_w_min,1,0,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("aggregate,lcaobs,r_w_min,1,all,", 0), 0u);
  EXPECT_NE(lines[2].find("feasible=1/1"), std::string::npos);
  EXPECT_DOUBLE_EQ(r.aggregates[0].mean_power_w, r.trials[0].total_power_w);
}

TEST(Experiment, DeterministicAcrossWorkerCounts) {
  ExperimentSpec spec = tiny_spec();
  spec.axis_values = {0.5, 1.5};
  spec.variants = {Variant::lcaobs, Variant::random};
  spec.n_trials = 3;
  const std::string one = to_csv(spec, run_experiment(spec));
  spec.workers = 3;
  const std::string three = to_csv(spec, run_experiment(spec));
  EXPECT_EQ(one, three);
}

TEST(Experiment, TrialsShareChannelsAcrossAxisValues) {
  EXPECT_EQ(trial_seed(7, 2), trial_seed(7, 2));
  EXPECT_NE(trial_seed(7, 2), trial_seed(7, 3));
  EXPECT_NE(trial_seed(7, 2), trial_seed(8, 2));
  ExperimentSpec spec = tiny_spec();
  spec.axis_values = {1.0, 2.0};
  spec.n_trials = 2;
  const ExperimentResult r = run_experiment(spec);
  ASSERT_EQ(r.trials.size(), 4u);
  EXPECT_EQ(r.trials[0].seed, r.trials[2].seed);
  EXPECT_LT(r.trials[0].total_power_w, r.trials[2].total_power_w);
}

TEST(Experiment, IterationAxisReadsTrace) {
  ExperimentSpec spec = tiny_spec();
  spec.axis = SweepAxis::iterations;
  spec.axis_values = {1, 2, 3, 30};
  const ExperimentResult r = run_experiment(spec);
  ASSERT_EQ(r.trials.size(), 4u);
  for (std::size_t i = 1; i < r.trials.size(); ++i) {
    EXPECT_LE(r.trials[i].total_power_w, r.trials[i - 1].total_power_w + 1e-12);
  }
}

TEST(Experiment, ConfidenceInterval) {
  ExperimentSpec spec = tiny_spec();
  spec.n_trials = 4;
  const ExperimentResult r = run_experiment(spec);
  double mean = 0.0;
  for (const auto& t : r.trials) mean += t.total_power_w / 4.0;
  double ss = 0.0;
  for (const auto& t : r.trials) ss += (t.total_power_w - mean) * (t.total_power_w - mean);
  EXPECT_NEAR(r.aggregates[0].mean_power_w, mean, 1e-15);
  EXPECT_NEAR(r.aggregates[0].ci95_w, 1.96 * std::sqrt(ss / 3.0 / 4.0), 1e-15);
}

TEST(Experiment, SpecValidation) {
  ExperimentSpec spec = tiny_spec();
  spec.n_trials = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = tiny_spec();
  spec.axis_values = {2.0, 1.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.axis_values.clear();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Experiment, FromConfig) {
  const auto cfg = KeyValueConfig::parse(
      "axis = x_ris\n"
      "axis_range = 80:95:5\n"
      "variants = LCAOBS, ris-noma\n"
      "n_trials = 3\n"
      "base_seed = 9\n"
      "l_ris = 5\n");
  const ExperimentSpec spec = experiment_from_config(cfg);
  EXPECT_EQ(spec.axis, SweepAxis::x_ris);
  EXPECT_EQ(spec.axis_values, (std::vector<double>{80, 85, 90, 95}));
  EXPECT_EQ(spec.variants, (std::vector<Variant>{Variant::lcaobs, Variant::ris_noma}));
  EXPECT_EQ(spec.n_trials, 3);
  EXPECT_EQ(spec.base_seed, 9u);
  EXPECT_EQ(spec.scenario.l_ris, 5);
  EXPECT_THROW(experiment_from_config(KeyValueConfig::parse("axis = nope\naxis_values = 1\n")),
               ConfigError);
  EXPECT_THROW(
      experiment_from_config(KeyValueConfig::parse("axis_values = 1\nvariants = bogus\n")),
      ConfigError);
}

TEST(Experiment, ApplyAxis) {
  const Scenario base;
  EXPECT_EQ(apply_axis(base, SweepAxis::bits, 3).bits, 3);
  EXPECT_EQ(apply_axis(base, SweepAxis::l_ris, 6).l_ris, 6);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepAxis::r_w_min, 2.5).qos_bits_w, 2.5);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepAxis::x_ris, 100).ris_pos.x, 100);
  EXPECT_DOUBLE_EQ(apply_axis(base, SweepAxis::x_weak, 55).user_w_pos.x, 55);
}

TEST(Experiment, UnwritableOutputThrows) {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult r;
  EXPECT_THROW(write_csv_file("/nonexistent-dir/out.csv", spec, r), std::runtime_error);
}

TEST(Experiment, CsvFileMatchesStream) {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult r = run_experiment(spec);
  const auto path = std::filesystem::temp_directory_path() / "riscnoma_experiment_test.csv";
  write_csv_file(path, spec, r);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), to_csv(spec, r));
  std::filesystem::remove(path);
}

TEST(FormatNumber, NineSignificantDigits) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.123456789012), "0.123456789");
  EXPECT_EQ(format_number(12345678901.0), "1.23456789e+10");
}

}  // namespace
}  // namespace riscnoma
