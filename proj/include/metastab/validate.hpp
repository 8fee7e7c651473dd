#pragma once

#include <string>
#include <vector>

namespace metastab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

// The acceptance battery. `quick` trims trial counts where the statistical
// thresholds scale with them; `full` runs the stated parameters.
std::vector<CriterionResult> run_acceptance(bool quick, int workers);

std::string acceptance_report_json(const std::vector<CriterionResult>& results);

}  // namespace metastab
