#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riscnoma/binary_program.hpp"
#include "riscnoma/scenario.hpp"

namespace riscnoma {

struct CrossCheck {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string worst;  // description of the largest mismatch, empty when all pass

  bool ok() const { return passed == total; }
};

struct CrossCheckReport {
  std::vector<CrossCheck> checks;

  bool ok() const;
};

/// Builds `instances` random DT and CT phase programs on channels drawn from
/// `sc` and compares the branch-and-bound results with exhaustive search:
/// feasibility verdicts, max-min slacks, maximal CT gains, and the
/// indicator-form identity at the decoded phases.
CrossCheckReport run_cross_checks(const Scenario& sc, int instances, std::uint64_t base_seed,
                                  const IlpOptions& ilp = {});

}  // namespace riscnoma
