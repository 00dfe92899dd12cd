#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specrange {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string target;    // what had to hold
  std::string achieved;  // what was measured
  bool pass = false;
  double seconds = 0.0;  // wall time; printed, never written to artifact files
};

struct AcceptanceOptions {
  std::string out_dir;
  double tol_scale = 1.0;  // multiplies every numeric tolerance; 0 forces failures
  std::string only;        // substring filter over criterion names; empty runs all
  std::uint64_t seed = 0;
};

// Runs the criteria in order, collecting failures instead of stopping. Every
// criterion writes its evidence files under out_dir/criterion<id>/.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

std::string acceptance_table(const std::vector<CriterionResult>& rows);
bool all_passed(const std::vector<CriterionResult>& rows);

}  // namespace specrange
