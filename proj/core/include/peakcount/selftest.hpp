#pragma once

#include <functional>
#include <string>
#include <vector>

namespace peakcount {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria in order, invoking on_result after each one.
/// Returns true when every criterion passed.
bool run_acceptance(const std::function<void(const CriterionResult&)>& on_result);

}  // namespace peakcount
