#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mueg/report.hpp"

namespace mueg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_pass = false;
  double seconds = 0.0;
  // Wall-clock budget in seconds; 0 means none.
  double budget = 0.0;
  bool pass = false;
  // Short key numbers for the summary line.
  std::string detail;
  Report report;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  // Empty runs every criterion.
  std::vector<int> only;
};

constexpr int acceptance_criterion_count = 15;

// Runs the acceptance criteria in order. Exceptions inside a criterion mark it failed with the message.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  3  constructor marginal fidelity  (12.3 s / 300 s)  detail"
std::string summary_line(const CriterionResult& r);

}  // namespace mueg
