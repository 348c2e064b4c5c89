#pragma once

#include <string>
#include <vector>

namespace dicke::repro {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

CriterionResult dark_state_algebra();
CriterionResult coupling_oracle();
CriterionResult adiabatic_transfer();
CriterionResult full_vs_reduced();
CriterionResult spin_noise_profile();
CriterionResult witness_values();
CriterionResult paper_arithmetic();
CriterionResult bound_sandwich();
CriterionResult parity_pipeline();
CriterionResult shot_noise_statistics();

/// All criteria in order 1..10.
std::vector<CriterionResult> run_all();

/// "[PASS] 3 adiabatic transfer: <detail>"
std::string format_line(const CriterionResult &result);

} // namespace dicke::repro
