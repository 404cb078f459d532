#pragma once

// Censored sweep: runs a plan of tests at every step of a censoring schedule.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "censormorph/censoring.hpp"
#include "censormorph/stat_tests.hpp"

namespace censormorph {

/// Either every group, or an ordered pair (first, second).
struct Comparison {
  bool all = true;
  std::size_t first = 0;
  std::size_t second = 0;

  static Comparison all_groups() { return {}; }
  static Comparison pair(std::size_t a, std::size_t b) { return {false, a, b}; }
};

struct TestSpec {
  TestKind kind = TestKind::kruskal_wallis;
  Comparison comparison;
  Alternative alternative = Alternative::not_applicable;
};

/// "all" or "<first> vs <second>".
std::string comparison_label(const Comparison& c, std::span<const std::string> labels);

/// Kruskal-Wallis and both ANOVA variants across all groups, then Wilcoxon and
/// Welch t with the `less` alternative for every ordered pair.
std::vector<TestSpec> standard_plan(std::size_t group_count);

/// Throws ConfigError for tests that cannot run on censored steps (K-S,
/// Lilliefors) or comparisons that reference missing groups.
void validate_plan(std::span<const TestSpec> plan, std::size_t group_count);

struct SweepGroup {
  std::string label;
  std::span<const double> sorted;
};

struct SweepResult {
  std::vector<TestSpec> plan;
  std::vector<std::vector<std::size_t>> counts;  ///< [group][step]
  std::vector<TestResult> results;               ///< step-major: [step * plan.size() + test]

  const TestResult& at(std::size_t step, std::size_t test) const { return results[step * plan.size() + test]; }
};

/// Evaluates `plan` at every step with prefix summaries; O(N log N + S * plan).
/// Each step's results equal a direct call of the corresponding test on the
/// censored samples.
SweepResult censored_sweep(std::span<const SweepGroup> groups, const CensoringSchedule& schedule,
                           std::span<const TestSpec> plan);

/// Runs `spec` directly on full samples through the public test functions.
TestResult run_direct(const TestSpec& spec, std::span<const std::span<const double>> samples);

}  // namespace censormorph
