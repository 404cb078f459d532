#include "censormorph/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "censormorph/errors.hpp"
#include "censormorph/rng.hpp"

namespace censormorph {

FrequencyProfile make_profile(std::vector<std::uint64_t> stacks) {
  FrequencyProfile profile;
  profile.total = std::accumulate(stacks.begin(), stacks.end(), std::uint64_t{0});
  if (stacks.empty() || profile.total == 0) throw InvalidParams("profile needs a positive total");
  profile.probabilities.reserve(stacks.size());
  for (const auto v : stacks) {
    profile.probabilities.push_back(static_cast<double>(v) / static_cast<double>(profile.total));
  }
  profile.stacks = std::move(stacks);
  return profile;
}

FrequencyProfile reference_profile() {
  return make_profile({2059, 1898, 1764, 1670, 1492, 1268, 814, 417, 142, 81, 61, 16});
}

std::string_view to_string(RemainderPlacement p) noexcept {
  return p == RemainderPlacement::sorted ? "sorted" : "append";
}

std::optional<RemainderPlacement> parse_remainder_placement(std::string_view s) noexcept {
  if (s == "sorted") return RemainderPlacement::sorted;
  if (s == "append") return RemainderPlacement::append;
  return std::nullopt;
}

FrequencyProfile derive_profile(const FrequencyProfile& reference, std::int64_t eta, RemainderPlacement placement) {
  const auto max_stack = static_cast<std::int64_t>(*std::max_element(reference.stacks.begin(), reference.stacks.end()));
  if (eta < 0 || eta >= max_stack) {
    throw EtaOutOfRange("eta must lie in [0, " + std::to_string(max_stack) + ")");
  }
  std::vector<std::uint64_t> shifted;
  shifted.reserve(reference.size() + 1);
  std::uint64_t shifted_total = 0;
  for (const auto v : reference.stacks) {
    const auto d = static_cast<std::uint64_t>(std::abs(static_cast<std::int64_t>(v) - eta));
    shifted.push_back(d);
    shifted_total += d;
  }
  if (shifted_total > reference.total) {
    throw EtaOutOfRange("eta = " + std::to_string(eta) + " leaves a negative remainder stack");
  }
  std::sort(shifted.begin(), shifted.end(), std::greater<>{});
  shifted.push_back(reference.total - shifted_total);
  if (placement == RemainderPlacement::sorted) std::sort(shifted.begin(), shifted.end(), std::greater<>{});
  return make_profile(std::move(shifted));
}

void validate(const GeneratorParams& params) {
  if (params.eta < 0 || params.eta >= kReferenceMaxStack) {
    throw EtaOutOfRange("eta must lie in [0, " + std::to_string(kReferenceMaxStack) + ")");
  }
  if (!(params.r > 0.0 && params.r < 2.0)) throw InvalidParams("r must lie in (0, 2)");
  if (params.n == 0) throw InvalidParams("n must be positive");
}

DistanceSet generate(const FrequencyProfile& profile, const GeneratorParams& params) {
  validate(params);
  if (profile.total == 0) throw InvalidParams("empty profile");
  std::vector<double> cumulative(profile.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    running += profile.stacks[i];
    cumulative[i] = static_cast<double>(running);
  }
  const auto total = static_cast<double>(profile.total);

  Rng rng(params.seed);
  std::vector<double> distances(params.n);
  for (auto& d : distances) {
    const double u = rng.uniform() * total;
    const auto stack = static_cast<double>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    const double offset = rng.uniform() * params.r;
    d = (stack + offset) / 2.0;
  }
  return make_distance_set("simulated", Hemisphere::left, std::move(distances));
}

DistanceSet simulate(const GeneratorParams& params, RemainderPlacement placement) {
  validate(params);
  return generate(derive_profile(reference_profile(), params.eta, placement), params);
}

double mixture_cdf(const FrequencyProfile& profile, double r, double x) {
  if (!(r > 0.0)) throw InvalidParams("r must be positive");
  double f = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    f += profile.probabilities[i] * std::clamp((2.0 * x - static_cast<double>(i)) / r, 0.0, 1.0);
  }
  return std::clamp(f, 0.0, 1.0);
}

double mixture_mean(const FrequencyProfile& profile, double r) {
  double mean = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    mean += profile.probabilities[i] * (static_cast<double>(i) + 0.5 * r) / 2.0;
  }
  return mean;
}

}  // namespace censormorph
