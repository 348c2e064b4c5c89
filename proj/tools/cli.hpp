#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dicke::cli {

inline constexpr const char *kToolName = "dickesim";
inline constexpr const char *kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kPhysicsPrecondition = 2,
  kNumericalFailure = 3,
};

/// Entry point shared by main() and the tests. argv[0] is the program name.
int run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err);

/// Parsed `bounds` input. Raw value strings are kept for the CSV echo.
struct BoundsInput {
  double witness = 0.0;
  double sigma_witness = 0.0;
  std::vector<double> populations;
  std::vector<double> sigma_populations;
  double j_max = 0.0;
  std::vector<std::pair<std::string, std::string>> raw;
};

/// Reads `key = value` lines (# comments, lists separated by commas or
/// spaces, optional brackets). Required keys: W, p_list, j_M.
BoundsInput parse_bounds_input(std::istream &in);

/// `key = value` lines turned into `--key value` tokens.
std::vector<std::string> config_tokens(std::istream &in);

} // namespace dicke::cli
