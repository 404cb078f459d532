#include "censormorph/censoring.hpp"

#include <algorithm>
#include <cmath>

#include "censormorph/errors.hpp"

namespace censormorph {

CensoringSchedule make_schedule(double delta, double d_max, double reliable_lo) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidParameter("delta must be positive");
  if (!(d_max > 0.0) || !std::isfinite(d_max)) throw InvalidParameter("d_max must be positive");
  if (!(reliable_lo >= 0.0 && reliable_lo <= d_max)) {
    throw InvalidParameter("reliable_lo must lie in [0, d_max]");
  }
  const double ratio = d_max / delta;
  const auto last = static_cast<int>(std::floor(ratio * (1.0 + 1e-9)));

  CensoringSchedule schedule;
  schedule.delta = delta;
  schedule.d_max = d_max;
  schedule.reliable_lo = reliable_lo;
  schedule.steps.reserve(static_cast<std::size_t>(last) + 1);
  for (int k = 0; k <= last; ++k) schedule.steps.push_back({k, k * delta});
  auto& final_gamma = schedule.steps.back().gamma;
  if (std::abs(final_gamma - d_max) <= 1e-9 * d_max) final_gamma = d_max;
  return schedule;
}

std::size_t censored_count(std::span<const double> sorted, double gamma) noexcept {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), gamma) - sorted.begin());
}

CensoredView censor(const PooledSample& sample, double gamma) {
  return {0, gamma, censored_count(sample.distances, gamma), &sample};
}

std::vector<std::size_t> sweep_counts(std::span<const double> sorted, const CensoringSchedule& schedule) {
  std::vector<std::size_t> counts;
  counts.reserve(schedule.size());
  std::size_t cursor = 0;
  for (const auto& step : schedule.steps) {
    while (cursor < sorted.size() && sorted[cursor] <= step.gamma) ++cursor;
    counts.push_back(cursor);
  }
  return counts;
}

std::vector<CensoredView> censor_sweep(const PooledSample& sample, const CensoringSchedule& schedule) {
  const auto counts = sweep_counts(sample.distances, schedule);
  std::vector<CensoredView> views;
  views.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    views.push_back({schedule.steps[i].k, schedule.steps[i].gamma, counts[i], &sample});
  }
  return views;
}

}  // namespace censormorph
