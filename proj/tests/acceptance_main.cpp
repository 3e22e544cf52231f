// Runs every acceptance criterion at its full target and prints one line
// per criterion. Exit status is non-zero if any criterion fails.
#include <algorithm>
#include <iostream>

#include "lps/acceptance.hpp"

int main() {
  const auto results = lps::run_acceptance(lps::AcceptanceLimits{}, [](const lps::CriterionResult& r) {
    std::cout << lps::format_result_line(r) << std::endl;
  });
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  std::cout << passed << '/' << results.size() << " acceptance criteria passed" << std::endl;
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}
