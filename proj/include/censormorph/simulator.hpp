#pragma once

// Stacked-uniform generator of synthetic distance samples.
//
// A distance is (J + U) / 2 where J is a stack index drawn from a frequency
// profile and U ~ Uniform[0, r). Stack j therefore covers the 0.5 mm layer
// [j/2, (j + r)/2); r > 1 makes neighbouring layers overlap.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "censormorph/lcdm_core.hpp"

namespace censormorph {

struct FrequencyProfile {
  std::vector<std::uint64_t> stacks;
  std::uint64_t total = 0;
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return stacks.size(); }
};

/// Validates counts and fills total and probabilities.
FrequencyProfile make_profile(std::vector<std::uint64_t> stacks);

/// Counts of the reference subject's distances in the twelve 0.5 mm layers.
FrequencyProfile reference_profile();

/// Where the remainder stack goes in a derived profile.
enum class RemainderPlacement {
  sorted,  ///< merged into the descending sort with the shifted stacks
  append,  ///< kept as the last (13th) stack
};

std::string_view to_string(RemainderPlacement p) noexcept;
std::optional<RemainderPlacement> parse_remainder_placement(std::string_view s) noexcept;

/// Shift every stack to |v_i - eta|, sort descending, and add a remainder
/// stack total - sum |v_i - eta| so the profile keeps the reference total.
/// Throws EtaOutOfRange if eta >= max stack or the remainder would be negative.
FrequencyProfile derive_profile(const FrequencyProfile& reference, std::int64_t eta,
                                RemainderPlacement placement = RemainderPlacement::sorted);

struct GeneratorParams {
  std::int64_t eta = 0;
  double r = 1.0;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
};

/// Largest stack of the reference profile; eta must stay below it.
inline constexpr std::int64_t kReferenceMaxStack = 2059;

/// Throws InvalidParams unless r in (0, 2) and n > 0, EtaOutOfRange unless 0 <= eta < 2059.
void validate(const GeneratorParams& params);

/// n sorted draws of (J + U)/2 from `profile`; deterministic in params.seed.
DistanceSet generate(const FrequencyProfile& profile, const GeneratorParams& params);

/// Derives the profile from the reference at params.eta, then generates.
DistanceSet simulate(const GeneratorParams& params, RemainderPlacement placement = RemainderPlacement::sorted);

/// Exact CDF of the generator output: sum_i p_i clamp((2x - i)/r, 0, 1).
double mixture_cdf(const FrequencyProfile& profile, double r, double x);

/// Closed-form mean sum_i p_i (i + r/2) / 2.
double mixture_mean(const FrequencyProfile& profile, double r);

}  // namespace censormorph
