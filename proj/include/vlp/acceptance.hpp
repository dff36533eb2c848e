#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vlp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Criteria are numbered 1..12.
std::vector<int> acceptance_ids();
CriterionResult run_criterion(int id);

/// "PASS 3 maximal oracle equivalence: ... (0.8 s)"
std::string format_result(const CriterionResult& r);

/// Runs the given criteria, printing one line each; returns the number of failures.
int run_acceptance(std::ostream& os, const std::vector<int>& ids);

}  // namespace vlp
