#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beadforge/stats.hpp"

namespace beadforge {

struct AcceptanceConfig {
  std::uint64_t seed = 42;
  int jobs = 1;
  std::vector<int> criteria;  // empty: 1..12
};

// Exact checks are deterministic properties; statistical ones are tests at
// the pinned significance levels.
struct Check {
  TestReport report;
  bool exact = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool passed = false;
};

// A criterion passes when every exact check passes and at least 95% of its
// statistical checks pass.
inline constexpr double kStatisticalPassFraction = 0.95;
bool criterion_passes(const std::vector<Check>& checks);

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config);

// JSON lines: one per check, then one summary per criterion. Contains no
// timing or thread information, so equal seeds give equal bytes.
std::string acceptance_report(const std::vector<CriterionResult>& results);

// "criterion 3 PASS  coin-tossing split  (18/18 statistical, 0/0 exact)"
std::string summary_line(const CriterionResult& r);

}  // namespace beadforge
