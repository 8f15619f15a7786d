#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "riscnoma_tools/cli.hpp"

namespace riscnoma::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kConfigDir = RISCNOMA_CONFIG_DIR;

TEST(Cli, RunPrintsReport) {
  const auto r = invoke({"run", "--config", kConfigDir + "/small.cfg", "--variant", "lcaobs",
                         "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("status = converged"), std::string::npos);
  EXPECT_NE(r.out.find("total_power_w = "), std::string::npos);
  EXPECT_NE(r.out.find("p_s_w = "), std::string::npos);
  EXPECT_NE(r.out.find("iterations = "), std::string::npos);
  EXPECT_NE(r.out.find("seed = 7\n"), std::string::npos);
}

TEST(Cli, UnknownVariantListsNames) {
  const auto r = invoke({"run", "--variant", "bogus"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("lcaobs"), std::string::npos);
  EXPECT_NE(r.err.find("ris-noma"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"launch"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--seed", "abc"}).code, kExitUsage);
  EXPECT_EQ(invoke({"sweep"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--config", "/nonexistent/file.cfg"}).code, kExitUsage);
}

TEST(Cli, InfeasibleRunExitsOne) {
  EXPECT_EQ(run_exit_code(RunStatus::infeasible), kExitInfeasible);
  EXPECT_EQ(run_exit_code(RunStatus::converged), kExitOk);
  EXPECT_EQ(run_exit_code(RunStatus::max_iters), kExitOk);
}

TEST(Cli, OraclePassesOnSmallConfig) {
  const auto r = invoke({"oracle", "--config", kConfigDir + "/small.cfg"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("PASS dt verdict 50/50"), std::string::npos);
}

TEST(Cli, SweepWritesCsv) {
  const auto cfg = std::filesystem::temp_directory_path() / "riscnoma_cli_sweep.cfg";
  const auto csv = std::filesystem::temp_directory_path() / "riscnoma_cli_sweep.csv";
  {
    std::ofstream f(cfg);
    f << "n_t = 2\nl_ris = 3\nbits = 1\naxis = r_w_min\naxis_values = 1, 2, 3\n"
         "variants = lcaobs, cnoma-noris\nn_trials = 2\nworkers = 1\n";
  }
  const auto r = invoke({"sweep", "--config", cfg.string(), "--out", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("row_type,variant,axis", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 2 * 3 * 2 + 2 * 3);
  const auto only = invoke({"sweep", "--config", cfg.string(), "--variant", "random"});
  EXPECT_EQ(only.code, kExitOk);
  EXPECT_EQ(only.out.find("lcaobs"), std::string::npos);
  EXPECT_NE(only.out.find("trial,random"), std::string::npos);
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
}

}  // namespace
}  // namespace riscnoma::cli
