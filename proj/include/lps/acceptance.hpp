#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "lps/types.hpp"

namespace lps {

// Ranges and thresholds of the acceptance criteria. The defaults are the
// full targets.
struct AcceptanceLimits {
  Value golden_max = 10;
  Value oracle_max = 11;
  Value perf_n = 20;
  Value soundness_max = 18;
  Value lemma_max = 2000;
  Value blue_table_n = 10080;
  Value sandwich_max = 20;
  Value family_max = 16;
  unsigned threads = 4;

  // Enumeration-backed ranges capped at max_n; the others keep their
  // targets.
  static AcceptanceLimits capped(Value max_n);
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  std::chrono::milliseconds elapsed{0};
};

// First ten terms of D(n).
inline constexpr Value kGoldenCounts[] = {2, 2, 3, 5, 4, 6, 12, 10, 14, 26};

CriterionResult check_golden_sequence(const AcceptanceLimits& lim);
CriterionResult check_oracle_equivalence(const AcceptanceLimits& lim);
CriterionResult check_performance(const AcceptanceLimits& lim);
CriterionResult check_exponent_constants(const AcceptanceLimits& lim);
CriterionResult check_density_cross_check(const AcceptanceLimits& lim);
CriterionResult check_coloring_soundness(const AcceptanceLimits& lim);
CriterionResult check_lemma_exhaustion(const AcceptanceLimits& lim);
CriterionResult check_blue_count_table(const AcceptanceLimits& lim);
CriterionResult check_sandwich(const AcceptanceLimits& lim);
CriterionResult check_family_validity(const AcceptanceLimits& lim);

// Runs all ten in order; `on_result` sees each one as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceLimits& lim,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace lps
