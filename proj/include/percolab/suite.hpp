#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace percolab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  nlohmann::json detail = nlohmann::json::object();

  nlohmann::json to_json() const;
  // One human-readable line: "[PASS] 3 name: summary (12.3 s)".
  std::string line() const;
};

// Runs the acceptance criteria (all when `which` is empty). `scale` < 1
// shrinks replica counts for quick runs; verdicts are only meaningful at 1.
std::vector<CriterionResult> run_suite(double scale, const std::vector<int>& which,
                                       std::uint64_t seed);
CriterionResult run_criterion(int id, double scale, std::uint64_t seed);

}  // namespace percolab
