#pragma once

// Censoring schedule gamma_k = k * delta and prefix views of sorted samples.

#include <cstddef>
#include <span>
#include <vector>

#include "censormorph/lcdm_core.hpp"

namespace censormorph {

inline constexpr double kDefaultDelta = 0.01;
inline constexpr double kDefaultDmax = 5.5;
inline constexpr double kDefaultReliableLo = 1.0;

struct CensoringStep {
  int k = 0;
  double gamma = 0.0;
};

struct CensoringSchedule {
  double delta = kDefaultDelta;
  double d_max = kDefaultDmax;
  double reliable_lo = kDefaultReliableLo;
  std::vector<CensoringStep> steps;

  std::size_t size() const noexcept { return steps.size(); }
  /// Reporting gate only; every step is computed.
  bool reliable(std::size_t step) const noexcept { return steps[step].gamma >= reliable_lo; }
};

/// Steps k = 0..floor(d_max/delta), gamma = k*delta.
///
/// The floor tolerates a relative 1e-9 of rounding in d_max/delta so that
/// e.g. (0.1, 0.3) has four steps, and a final gamma within that tolerance of
/// d_max is snapped onto d_max so the last step always covers data at d_max.
CensoringSchedule make_schedule(double delta = kDefaultDelta, double d_max = kDefaultDmax,
                                double reliable_lo = kDefaultReliableLo);

/// The prefix of a pooled sample retained at one step: every d <= gamma.
struct CensoredView {
  int step_k = 0;
  double gamma = 0.0;
  std::size_t count = 0;
  const PooledSample* source = nullptr;

  std::span<const double> values() const noexcept {
    return source ? std::span<const double>(source->distances).first(count) : std::span<const double>{};
  }
};

/// Number of values <= gamma in a sorted sequence.
std::size_t censored_count(std::span<const double> sorted, double gamma) noexcept;

CensoredView censor(const PooledSample& sample, double gamma);
std::vector<CensoredView> censor_sweep(const PooledSample& sample, const CensoringSchedule& schedule);

/// Prefix lengths of `sorted` for every schedule step in one forward pass.
std::vector<std::size_t> sweep_counts(std::span<const double> sorted, const CensoringSchedule& schedule);

}  // namespace censormorph
