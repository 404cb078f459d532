#pragma once

// Monte Carlo size and power curves over a censoring schedule.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "censormorph/analysis.hpp"
#include "censormorph/censoring.hpp"
#include "censormorph/simulator.hpp"
#include "censormorph/stat_tests.hpp"

namespace censormorph {

struct SampleSpec {
  std::string label;
  std::int64_t eta = 0;
  double r = 1.0;
  std::size_t n = 10000;
};

struct ScenarioConfig {
  std::vector<SampleSpec> samples;
  std::size_t n_mc = 1000;
  double alpha = 0.05;
  double level = 0.95;  ///< confidence level of the bands
  CensoringSchedule schedule = make_schedule();
  std::vector<TestSpec> tests;
  std::uint64_t master_seed = 0;
  RemainderPlacement placement = RemainderPlacement::sorted;
};

void validate(const ScenarioConfig& config);

struct CurveRow {
  int step = 0;
  double gamma = 0.0;
  TestSpec test;
  double mean_p = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
  double rejection_rate = 0.0;
  double rej_lo = 0.0;
  double rej_hi = 0.0;
  std::size_t n_valid = 0;
  std::size_t rejections = 0;
};

struct CurveSet {
  std::vector<std::string> labels;
  std::vector<TestSpec> tests;
  std::vector<CurveRow> rows;  ///< step-major, tests in config order
  std::size_t n_mc = 0;

  const CurveRow& at(std::size_t step, std::size_t test) const { return rows[step * tests.size() + test]; }
  /// Index of the first test matching kind/comparison/alternative; throws ConfigError if absent.
  std::size_t find(TestKind kind, const Comparison& c, Alternative alt) const;
};

/// Normal-approximation binomial interval, clamped to [0, 1].
std::pair<double, double> rejection_band(std::size_t successes, std::size_t trials, double level);
/// mean +/- z sd / sqrt(n), clamped to [0, 1].
std::pair<double, double> mean_band(std::span<const double> values, double level);
std::pair<double, double> mean_band(const Moments& moments, double level);

/// Stream seed of one sample in one replication.
std::uint64_t replication_seed(std::uint64_t master, std::size_t replication, std::string_view label);

/// Results do not depend on `threads`.
CurveSet run_scenario(const ScenarioConfig& config, unsigned threads = 1);

/// "null-eq10" (all samples eta=0, r=1) or "alt-eq12" (Y: r=1.2, Z: eta=50).
/// Full scale is n=10000, N_mc=1000; `quick` uses n=2000, N_mc=200.
ScenarioConfig preset_scenario(std::string_view name, bool quick, std::uint64_t master_seed);

}  // namespace censormorph
