#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace interpres {

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  std::set<int> only;     // empty: criteria 1-9
  std::string cli_path;   // criterion 10 runs "<cli_path> selftest" when set
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::size_t cases = 0;
  std::string detail;      // first failure, or a summary
  double seconds = 0;
  double limit_seconds = 0;  // 0: untimed
};

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);
// "[PASS] 3 ackermann ..." style line.
std::string format_result(const CriterionResult& r);

}  // namespace interpres
