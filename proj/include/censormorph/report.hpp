#pragma once

// Analysis reports over pooled groups and their CSV/SVG serializations.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "censormorph/analysis.hpp"
#include "censormorph/harness.hpp"
#include "censormorph/kde.hpp"
#include "censormorph/lcdm_core.hpp"

namespace censormorph {

struct AnalysisRow {
  Hemisphere hemisphere = Hemisphere::left;
  int step = 0;
  double gamma = 0.0;
  TestSpec spec;
  std::string comparison;
  TestResult result;
  bool reliable = false;
  std::array<std::optional<std::size_t>, 3> group_n;
  std::optional<double> p_holm;
};

struct AnalysisReport {
  Hemisphere hemisphere = Hemisphere::left;
  std::vector<std::string> labels;
  std::vector<AnalysisRow> rows;
  bool has_holm = false;
};

/// Standard plan at every schedule step. At most three groups.
AnalysisReport censored_report(std::span<const PooledSample> groups, const CensoringSchedule& schedule);

struct PooledOptions {
  std::size_t lilliefors_mc = 1000;
  std::uint64_t seed = 0;
  bool holm = false;
};

/// Standard plan on the full pooled samples (reported at the last schedule
/// step), plus K-S for every unordered pair and Lilliefors per group.
/// With `holm`, pairwise rows get Holm-adjusted p-values per test family.
AnalysisReport pooled_report(std::span<const PooledSample> groups, const CensoringSchedule& schedule,
                             const PooledOptions& options);

/// `hemisphere,step,gamma_mm,test,comparison,alternative,statistic,df1,df2,
/// p_value,reliable,n_group1,n_group2,n_group3,reason`, plus `p_holm` when
/// the report carries adjusted values. Invalid results leave p_value empty.
std::string analysis_csv(const AnalysisReport& report);

/// `step,gamma_mm,test,comparison,alternative,mean_p,p_lo,p_hi,
/// rejection_rate,rej_lo,rej_hi,n_valid`.
std::string curves_csv(const CurveSet& curves);

/// `grid,<label>...` with one density column per curve; curves share a grid.
std::string density_csv(std::span<const std::string> labels, std::span<const DensityCurve> curves);

/// One SVG per test kind: p-value curves of every comparison with alpha and 1 - alpha guides.
std::string analysis_svg(const AnalysisReport& report, TestKind kind, double alpha, double d_max);
/// Average p (left) and rejection rate (right) with bands for one test of the set.
std::string curves_svg(const CurveSet& curves, std::size_t test, double alpha, double d_max);
std::string density_svg(std::span<const std::string> labels, std::span<const DensityCurve> curves);

}  // namespace censormorph
