#include "censormorph/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "censormorph/errors.hpp"
#include "censormorph/rng.hpp"
#include "censormorph/svg.hpp"

namespace censormorph {
namespace {

constexpr std::size_t kMaxGroups = 3;

std::string cell(double v) { return std::isnan(v) ? std::string{} : format_real(v); }
std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string{}; }
std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string{}; }

std::vector<std::string> labels_of(std::span<const PooledSample> groups) {
  if (groups.size() < 2) throw SingleGroup("at least 2 groups are needed for a comparison");
  if (groups.size() > kMaxGroups) throw ConfigError("at most 3 groups fit the analysis CSV schema");
  const auto h = groups.front().hemisphere;
  std::vector<std::string> labels;
  for (const auto& g : groups) {
    if (g.hemisphere != h) throw HemisphereMismatch("groups from different hemispheres");
    labels.push_back(g.group);
  }
  return labels;
}

std::array<std::optional<std::size_t>, 3> group_counts(const Comparison& c, std::span<const std::size_t> n) {
  std::array<std::optional<std::size_t>, 3> out;
  if (c.all) {
    for (std::size_t i = 0; i < n.size() && i < 3; ++i) out[i] = n[i];
  } else {
    out[0] = n[c.first];
    out[1] = n[c.second];
  }
  return out;
}

}  // namespace

AnalysisReport censored_report(std::span<const PooledSample> groups, const CensoringSchedule& schedule) {
  AnalysisReport report;
  report.labels = labels_of(groups);
  report.hemisphere = groups.front().hemisphere;
  std::vector<SweepGroup> sweep_groups;
  for (const auto& g : groups) sweep_groups.push_back({g.group, g.distances});
  const auto plan = standard_plan(groups.size());
  const auto sweep = censored_sweep(sweep_groups, schedule, plan);

  report.rows.reserve(schedule.size() * plan.size());
  std::vector<std::size_t> n(groups.size());
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    for (std::size_t i = 0; i < groups.size(); ++i) n[i] = sweep.counts[i][s];
    for (std::size_t t = 0; t < plan.size(); ++t) {
      report.rows.push_back({report.hemisphere, schedule.steps[s].k, schedule.steps[s].gamma, plan[t],
                             comparison_label(plan[t].comparison, report.labels), sweep.at(s, t),
                             schedule.reliable(s), group_counts(plan[t].comparison, n), std::nullopt});
    }
  }
  return report;
}

AnalysisReport pooled_report(std::span<const PooledSample> groups, const CensoringSchedule& schedule,
                             const PooledOptions& options) {
  AnalysisReport report;
  report.labels = labels_of(groups);
  report.hemisphere = groups.front().hemisphere;
  report.has_holm = options.holm;

  std::vector<std::span<const double>> samples;
  std::vector<std::size_t> n;
  for (const auto& g : groups) {
    samples.push_back(g.distances);
    n.push_back(g.size());
  }
  auto plan = standard_plan(groups.size());
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      plan.push_back({TestKind::ks_two_sample, Comparison::pair(a, b), Alternative::two_sided});
    }
  }
  const auto& last = schedule.steps.back();
  const bool reliable = schedule.reliable(schedule.size() - 1);

  // Direct calls can throw on data too small for the test; those become invalid rows.
  const auto guarded = [](const TestSpec& spec, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::data) throw;
      return TestResult::invalid(spec.kind, spec.alternative, "insufficient-data");
    }
  };
  for (const auto& spec : plan) {
    report.rows.push_back({report.hemisphere, last.k, last.gamma, spec,
                           comparison_label(spec.comparison, report.labels),
                           guarded(spec, [&] { return run_direct(spec, samples); }), reliable,
                           group_counts(spec.comparison, n), std::nullopt});
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const TestSpec spec{TestKind::lilliefors, Comparison::pair(i, i), Alternative::not_applicable};
    const auto seed = derive_seed(options.seed, i, report.labels[i]);
    AnalysisRow row{report.hemisphere, last.k, last.gamma, spec, report.labels[i],
                    guarded(spec, [&] { return lilliefors(samples[i], options.lilliefors_mc, seed); }), reliable,
                    {}, std::nullopt};
    row.group_n[0] = n[i];
    report.rows.push_back(std::move(row));
  }

  if (options.holm) {
    for (const auto kind : {TestKind::wilcoxon, TestKind::welch_t, TestKind::ks_two_sample}) {
      std::vector<std::size_t> idx;
      std::vector<double> p;
      for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const auto& row = report.rows[r];
        if (row.spec.kind == kind && row.result.valid) {
          idx.push_back(r);
          p.push_back(row.result.p_value);
        }
      }
      const auto adjusted = holm_adjust(p);
      for (std::size_t i = 0; i < idx.size(); ++i) report.rows[idx[i]].p_holm = adjusted[i];
    }
  }
  return report;
}

std::string analysis_csv(const AnalysisReport& report) {
  std::string out =
      "hemisphere,step,gamma_mm,test,comparison,alternative,statistic,df1,df2,p_value,reliable,"
      "n_group1,n_group2,n_group3,reason";
  out += report.has_holm ? ",p_holm\n" : "\n";
  for (const auto& row : report.rows) {
    const auto& r = row.result;
    out += to_string(row.hemisphere);
    out += ',' + std::to_string(row.step) + ',' + format_real(row.gamma) + ',';
    out += to_string(row.spec.kind);
    out += ',' + row.comparison + ',';
    out += to_string(r.alternative);
    out += ',' + (r.valid ? cell(r.statistic) : std::string{}) + ',' + cell(r.df1) + ',' + cell(r.df2) + ',';
    out += r.valid ? cell(r.p_value) : std::string{};
    out += row.reliable ? ",true," : ",false,";
    out += cell(row.group_n[0]) + ',' + cell(row.group_n[1]) + ',' + cell(row.group_n[2]) + ',';
    out += r.valid ? std::string{} : r.invalid_reason;
    if (report.has_holm) out += ',' + cell(row.p_holm);
    out += '\n';
  }
  return out;
}

std::string curves_csv(const CurveSet& curves) {
  std::string out =
      "step,gamma_mm,test,comparison,alternative,mean_p,p_lo,p_hi,rejection_rate,rej_lo,rej_hi,n_valid\n";
  for (const auto& row : curves.rows) {
    out += std::to_string(row.step) + ',' + format_real(row.gamma) + ',';
    out += to_string(row.test.kind);
    out += ',' + comparison_label(row.test.comparison, curves.labels) + ',';
    out += to_string(row.test.alternative);
    out += ',' + cell(row.mean_p) + ',' + cell(row.p_lo) + ',' + cell(row.p_hi) + ',' + cell(row.rejection_rate) +
           ',' + cell(row.rej_lo) + ',' + cell(row.rej_hi) + ',' + std::to_string(row.n_valid) + '\n';
  }
  return out;
}

std::string density_csv(std::span<const std::string> labels, std::span<const DensityCurve> curves) {
  if (curves.empty() || labels.size() != curves.size()) throw InvalidParameter("one label per curve required");
  std::string out = "grid";
  for (const auto& l : labels) out += ',' + l;
  out += '\n';
  const auto& grid = curves.front().grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_real(grid[i]);
    for (const auto& c : curves) out += ',' + format_real(c.density[i]);
    out += '\n';
  }
  return out;
}

std::string analysis_svg(const AnalysisReport& report, TestKind kind, double alpha, double d_max) {
  svg::Panel panel;
  panel.title = std::string(to_string(kind)) + " (" + std::string(to_string(report.hemisphere)) + ")";
  panel.y_label = "p-value";
  panel.x_max = d_max;
  panel.guides = {alpha};
  if (kind == TestKind::wilcoxon || kind == TestKind::welch_t) panel.guides.push_back(1.0 - alpha);
  std::vector<std::string> order;
  for (const auto& row : report.rows) {
    if (row.spec.kind != kind) continue;
    auto it = std::find(order.begin(), order.end(), row.comparison);
    if (it == order.end()) {
      order.push_back(row.comparison);
      panel.series.push_back({row.comparison + (row.spec.comparison.all ? "" : " (less)"), {}, {},
                              svg::palette(order.size() - 1), false});
      it = order.end() - 1;
    }
    auto& series = panel.series[static_cast<std::size_t>(it - order.begin())];
    series.x.push_back(row.gamma);
    series.y.push_back(row.result.valid ? row.result.p_value : std::numeric_limits<double>::quiet_NaN());
  }
  return svg::render({panel});
}

std::string curves_svg(const CurveSet& curves, std::size_t test, double alpha, double d_max) {
  const auto& spec = curves.tests.at(test);
  const std::string name = std::string(to_string(spec.kind)) + " " + comparison_label(spec.comparison, curves.labels) +
                           (spec.comparison.all ? "" : " (" + std::string(to_string(spec.alternative)) + ")");
  svg::Panel mean_panel;
  mean_panel.title = "average p-value: " + name;
  mean_panel.y_label = "average p-value";
  mean_panel.x_max = d_max;
  mean_panel.guides = {alpha};
  if (!spec.comparison.all) mean_panel.guides.push_back(1.0 - alpha);
  svg::Panel rej_panel = mean_panel;
  rej_panel.title = "rejection rate: " + name;
  rej_panel.y_label = "rejection rate";
  rej_panel.guides = {alpha};
  if (!spec.comparison.all) rej_panel.guides.push_back(1.0 - alpha);

  svg::Band p_band;
  svg::Band r_band;
  svg::Series p_line{"", {}, {}, "#000000", false};
  svg::Series r_line{"", {}, {}, "#000000", false};
  for (std::size_t s = 0; s * curves.tests.size() < curves.rows.size(); ++s) {
    const auto& row = curves.at(s, test);
    for (auto* band : {&p_band, &r_band}) band->x.push_back(row.gamma);
    p_band.lo.push_back(row.p_lo);
    p_band.hi.push_back(row.p_hi);
    r_band.lo.push_back(row.rej_lo);
    r_band.hi.push_back(row.rej_hi);
    p_line.x.push_back(row.gamma);
    p_line.y.push_back(row.mean_p);
    r_line.x.push_back(row.gamma);
    r_line.y.push_back(row.rejection_rate);
  }
  mean_panel.bands = {p_band};
  mean_panel.series = {p_line};
  rej_panel.bands = {r_band};
  rej_panel.series = {r_line};
  return svg::render({mean_panel, rej_panel});
}

std::string density_svg(std::span<const std::string> labels, std::span<const DensityCurve> curves) {
  svg::Panel panel;
  panel.title = "kernel density estimate";
  panel.x_label = "distance (mm)";
  panel.y_label = "density (1/mm)";
  panel.x_min = curves.front().grid.front();
  panel.x_max = curves.front().grid.back();
  double top = 0.0;
  for (const auto& c : curves) top = std::max(top, *std::max_element(c.density.begin(), c.density.end()));
  panel.y_max = top > 0.0 ? top * 1.1 : 1.0;
  panel.x_tick = std::max(0.5, std::ceil((panel.x_max - panel.x_min) / 12.0 * 2.0) / 2.0);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    panel.series.push_back({labels[i], curves[i].grid, curves[i].density, svg::palette(i), false});
  }
  return svg::render({panel});
}

}  // namespace censormorph
