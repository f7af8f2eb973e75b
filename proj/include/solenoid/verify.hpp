#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace solenoid {

struct VerifyConfig {
  std::uint64_t seed = 2026;
  int threads = 0;
  double tolerance_scale = 1.0;  // scales every tolerance; 0 makes all checks fail
  std::vector<int> only_criteria;  // empty = run all twelve
  std::filesystem::path report_path;  // optional JSON report output
};

struct CheckRow {
  std::string what;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckRow> checks;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
};

// Runs the acceptance criteria, printing one pass/fail line per criterion to
// `progress` when given. Tolerances are fixed here, not configurable beyond
// the global scale.
AcceptanceReport run_acceptance(const VerifyConfig& cfg, std::ostream* progress = nullptr);

std::string acceptance_report_json(const AcceptanceReport& report);

// Prints lines, optionally writes the JSON report; returns 0 when all
// executed criteria pass, 1 otherwise.
int run_verify(const VerifyConfig& cfg, std::ostream& out);

}  // namespace solenoid
