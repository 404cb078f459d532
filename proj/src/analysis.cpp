#include "censormorph/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "censormorph/errors.hpp"

namespace censormorph {
namespace {

// Rank sums per member group and the tie sum, snapshotted at every step.
struct RankSnapshots {
  std::vector<std::size_t> members;
  std::vector<std::vector<double>> rank_sums;  ///< [step][member]
  std::vector<double> tie_sums;                ///< [step]
};

RankSnapshots rank_snapshots(std::span<const SweepGroup> groups, std::vector<std::size_t> members,
                             const std::vector<std::vector<std::size_t>>& counts, std::size_t steps) {
  struct Item {
    double value;
    std::size_t member;
  };
  std::vector<Item> merged;
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (const double v : groups[members[m]].sorted) merged.push_back({v, m});
  }
  std::stable_sort(merged.begin(), merged.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  RankSnapshots snap;
  snap.members = std::move(members);
  snap.rank_sums.reserve(steps);
  snap.tie_sums.reserve(steps);
  std::vector<double> sums(snap.members.size(), 0.0);
  double tie_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t prefix = 0;
    for (const auto g : snap.members) prefix += counts[g][s];
    // Tied blocks never straddle a step boundary: every copy of a value <= gamma is retained.
    while (pos < prefix) {
      std::size_t end = pos + 1;
      while (end < merged.size() && merged[end].value == merged[pos].value) ++end;
      const double rank = block_mid_rank(pos, end);
      for (std::size_t i = pos; i < end; ++i) sums[merged[i].member] += rank;
      tie_sum += tie_term(end - pos);
      pos = end;
    }
    snap.rank_sums.push_back(sums);
    snap.tie_sums.push_back(tie_sum);
  }
  return snap;
}

std::size_t member_index(const RankSnapshots& snap, std::size_t group) {
  return static_cast<std::size_t>(std::find(snap.members.begin(), snap.members.end(), group) - snap.members.begin());
}

}  // namespace

std::string comparison_label(const Comparison& c, std::span<const std::string> labels) {
  if (c.all) return "all";
  return labels[c.first] + " vs " + labels[c.second];
}

std::vector<TestSpec> standard_plan(std::size_t group_count) {
  std::vector<TestSpec> plan{
      {TestKind::kruskal_wallis, Comparison::all_groups(), Alternative::not_applicable},
      {TestKind::anova_f_hov, Comparison::all_groups(), Alternative::not_applicable},
      {TestKind::anova_f_welch, Comparison::all_groups(), Alternative::not_applicable},
  };
  for (const auto kind : {TestKind::wilcoxon, TestKind::welch_t}) {
    for (std::size_t a = 0; a < group_count; ++a) {
      for (std::size_t b = 0; b < group_count; ++b) {
        if (a != b) plan.push_back({kind, Comparison::pair(a, b), Alternative::less});
      }
    }
  }
  return plan;
}

void validate_plan(std::span<const TestSpec> plan, std::size_t group_count) {
  if (group_count < 2) throw ConfigError("a sweep needs at least 2 groups");
  for (const auto& spec : plan) {
    switch (spec.kind) {
      case TestKind::kruskal_wallis:
      case TestKind::anova_f_hov:
      case TestKind::anova_f_welch:
        if (!spec.comparison.all) throw ConfigError(std::string(to_string(spec.kind)) + " compares all groups");
        break;
      case TestKind::wilcoxon:
      case TestKind::welch_t:
        if (spec.comparison.all || spec.comparison.first == spec.comparison.second ||
            spec.comparison.first >= group_count || spec.comparison.second >= group_count) {
          throw ConfigError(std::string(to_string(spec.kind)) + " needs two distinct groups");
        }
        if (spec.alternative == Alternative::not_applicable) {
          throw ConfigError(std::string(to_string(spec.kind)) + " needs a direction");
        }
        break;
      default:
        throw ConfigError(std::string(to_string(spec.kind)) + " is not run on censored steps");
    }
  }
}

SweepResult censored_sweep(std::span<const SweepGroup> groups, const CensoringSchedule& schedule,
                           std::span<const TestSpec> plan) {
  validate_plan(plan, groups.size());
  const std::size_t steps = schedule.size();
  const std::size_t g = groups.size();

  SweepResult out;
  out.plan.assign(plan.begin(), plan.end());
  out.counts.reserve(g);
  for (const auto& group : groups) out.counts.push_back(sweep_counts(group.sorted, schedule));

  bool need_moments = false;
  bool need_all_ranks = false;
  std::map<std::pair<std::size_t, std::size_t>, RankSnapshots> pair_ranks;
  for (const auto& spec : plan) {
    if (spec.kind == TestKind::kruskal_wallis) need_all_ranks = true;
    if (spec.kind == TestKind::anova_f_hov || spec.kind == TestKind::anova_f_welch || spec.kind == TestKind::welch_t) {
      need_moments = true;
    }
    if (spec.kind == TestKind::wilcoxon) {
      const auto key = std::minmax(spec.comparison.first, spec.comparison.second);
      if (!pair_ranks.contains(key)) {
        pair_ranks.emplace(key, rank_snapshots(groups, {key.first, key.second}, out.counts, steps));
      }
    }
  }
  RankSnapshots all_ranks;
  if (need_all_ranks) {
    std::vector<std::size_t> members(g);
    std::iota(members.begin(), members.end(), std::size_t{0});
    all_ranks = rank_snapshots(groups, std::move(members), out.counts, steps);
  }

  // Welford states pushed in sorted order, captured at every step.
  std::vector<std::vector<Moments>> moments(need_moments ? g : 0);
  for (std::size_t i = 0; i < moments.size(); ++i) {
    moments[i].reserve(steps);
    Moments m;
    std::size_t pos = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      for (; pos < out.counts[i][s]; ++pos) m.push(groups[i].sorted[pos]);
      moments[i].push_back(m);
    }
  }

  out.results.reserve(steps * plan.size());
  std::vector<RankTotal> rank_totals(g);
  std::vector<Moments> step_moments(g);
  for (std::size_t s = 0; s < steps; ++s) {
    for (const auto& spec : plan) {
      const auto& c = spec.comparison;
      switch (spec.kind) {
        case TestKind::kruskal_wallis:
          for (std::size_t i = 0; i < g; ++i) rank_totals[i] = {out.counts[i][s], all_ranks.rank_sums[s][i]};
          out.results.push_back(kruskal_wallis_kernel(rank_totals, all_ranks.tie_sums[s]));
          break;
        case TestKind::anova_f_hov:
        case TestKind::anova_f_welch:
          for (std::size_t i = 0; i < g; ++i) step_moments[i] = moments[i][s];
          out.results.push_back(anova_kernel(step_moments, spec.kind == TestKind::anova_f_hov));
          break;
        case TestKind::wilcoxon: {
          const auto& snap = pair_ranks.at(std::minmax(c.first, c.second));
          out.results.push_back(wilcoxon_kernel(out.counts[c.first][s], out.counts[c.second][s],
                                                snap.rank_sums[s][member_index(snap, c.first)], snap.tie_sums[s],
                                                spec.alternative));
          break;
        }
        case TestKind::welch_t:
          out.results.push_back(welch_t_kernel(moments[c.first][s], moments[c.second][s], spec.alternative));
          break;
        default:
          break;
      }
    }
  }
  return out;
}

TestResult run_direct(const TestSpec& spec, std::span<const std::span<const double>> samples) {
  const auto& c = spec.comparison;
  switch (spec.kind) {
    case TestKind::kruskal_wallis: return kruskal_wallis(samples);
    case TestKind::anova_f_hov: return anova_f(samples, true);
    case TestKind::anova_f_welch: return anova_f(samples, false);
    case TestKind::wilcoxon: return wilcoxon_rank_sum(samples[c.first], samples[c.second], spec.alternative);
    case TestKind::welch_t: return welch_t(samples[c.first], samples[c.second], spec.alternative);
    case TestKind::ks_two_sample: return ks_two_sample(samples[c.first], samples[c.second]);
    case TestKind::lilliefors: break;
  }
  throw ConfigError("lilliefors is a one-sample test; call it directly");
}

}  // namespace censormorph
