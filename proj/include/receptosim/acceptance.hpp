#pragma once

#include <string>
#include <vector>

#include "receptosim/controller.hpp"

namespace receptosim::sim {

struct CriterionCheck {
  std::string what;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // in the units named by `what`
  bool pass = false;
};

struct CriterionResult {
  std::string id;
  std::string name;
  std::vector<CriterionCheck> checks;
  double runtime_limit_s = 0.0;
  double runtime_s = 0.0;
  bool pass = false;
};

/// Runs every validation criterion (optionally only ids starting with
/// `filter`). Exceptions inside a criterion mark it failed, never abort the
/// suite.
std::vector<CriterionResult> run_acceptance(const std::string& filter = "");

/// Controller-exactness criterion with an injectable configuration, so a
/// misconfigured controller shows up as a named failure in the report.
CriterionResult criterion_controller_exactness(const control::Config& thorax_cfg);

std::string acceptance_report_json(const std::vector<CriterionResult>& results);

/// One line per criterion: "PASS C01 <name> (x.xs)" / "FAIL ...".
std::string acceptance_report_text(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace receptosim::sim
