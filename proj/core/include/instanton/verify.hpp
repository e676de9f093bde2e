#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace instanton {

enum class CheckStatus { Pass, Fail, ExpectedFail };

std::string_view to_string(CheckStatus status) noexcept;

struct CheckOutcome {
  bool ok;
  std::string detail;
};

// expected_failure marks checks of stated formulas that are known not to hold;
// their failure is reported as ExpectedFail and does not fail a suite.
struct Check {
  std::string id;
  std::string suite;
  bool expected_failure;
  std::function<CheckOutcome()> run;
};

struct CheckResult {
  std::string id;
  std::string suite;
  CheckStatus status;
  std::string detail;
};

const std::vector<Check>& check_registry();
std::vector<std::string> suite_names();

// "all" runs every suite. Unknown suite names raise InvalidArgument.
std::vector<CheckResult> run_suite(std::string_view suite);

bool suite_passed(const std::vector<CheckResult>& results);

}  // namespace instanton
