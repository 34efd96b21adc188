#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace evoelim {

// One acceptance check: a named criterion with its pinned bound and the worst
// measured value. measured <= bound is necessary but not sufficient for pass;
// checks with categorical sub-conditions fold those into pass directly.
struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
  double seconds = 0.0;
};

// Names of the built-in check suites, in canonical order.
std::vector<std::string> verification_suite_names();

// Runs the named suites ("all" expands to every suite). jobs caps the worker
// threads used inside trajectory sweeps; results do not depend on it.
std::vector<CheckResult> run_verification(const std::vector<std::string>& names, int jobs = 1);

void write_junit_xml(std::ostream& os, const std::vector<CheckResult>& results);
nlohmann::json verification_summary_json(const std::vector<CheckResult>& results);

}  // namespace evoelim
