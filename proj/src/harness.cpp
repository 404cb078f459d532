#include "censormorph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "censormorph/distributions.hpp"
#include "censormorph/errors.hpp"
#include "censormorph/rng.hpp"

namespace censormorph {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double band_z(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidParameter("confidence level must lie in (0, 1)");
  return norm_quantile(1.0 - (1.0 - level) / 2.0);
}

// p-values of one replication, NaN where the test was invalid.
std::vector<double> run_replication(const ScenarioConfig& config, std::span<const FrequencyProfile> profiles,
                                    std::size_t replication) {
  std::vector<DistanceSet> samples;
  samples.reserve(config.samples.size());
  for (std::size_t i = 0; i < config.samples.size(); ++i) {
    const auto& spec = config.samples[i];
    const GeneratorParams params{spec.eta, spec.r, spec.n,
                                 replication_seed(config.master_seed, replication, spec.label)};
    samples.push_back(generate(profiles[i], params));
  }
  std::vector<SweepGroup> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) groups.push_back({config.samples[i].label, samples[i].distances});
  const auto sweep = censored_sweep(groups, config.schedule, config.tests);
  std::vector<double> p(sweep.results.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = sweep.results[i].valid ? sweep.results[i].p_value : kNaN;
  return p;
}

}  // namespace

void validate(const ScenarioConfig& config) {
  if (config.samples.size() < 2) throw ConfigError("a scenario needs at least 2 samples");
  std::set<std::string> labels;
  for (const auto& s : config.samples) {
    if (s.label.empty() || !labels.insert(s.label).second) throw ConfigError("sample labels must be unique");
    validate(GeneratorParams{s.eta, s.r, s.n, 0});
  }
  if (config.n_mc < 1) throw ConfigError("n_mc must be at least 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(config.level > 0.0 && config.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  if (config.tests.empty()) throw ConfigError("no tests configured");
  if (config.schedule.steps.empty()) throw ConfigError("empty schedule");
  validate_plan(config.tests, config.samples.size());
}

std::size_t CurveSet::find(TestKind kind, const Comparison& c, Alternative alt) const {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& t = tests[i];
    if (t.kind == kind && t.alternative == alt && t.comparison.all == c.all &&
        (c.all || (t.comparison.first == c.first && t.comparison.second == c.second))) {
      return i;
    }
  }
  throw ConfigError("test not present in curve set");
}

std::pair<double, double> rejection_band(std::size_t successes, std::size_t trials, double level) {
  if (trials == 0 || successes > trials) throw InvalidCounts("need 0 <= successes <= trials, trials >= 1");
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const double half = band_z(level) * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

std::pair<double, double> mean_band(const Moments& moments, double level) {
  if (moments.n == 0) throw EmptyInput("mean band of no values");
  const double half = band_z(level) * std::sqrt(moments.variance() / static_cast<double>(moments.n));
  return {std::clamp(moments.mean - half, 0.0, 1.0), std::clamp(moments.mean + half, 0.0, 1.0)};
}

std::pair<double, double> mean_band(std::span<const double> values, double level) {
  return mean_band(moments_of(values), level);
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t replication, std::string_view label) {
  return derive_seed(master, replication, label);
}

CurveSet run_scenario(const ScenarioConfig& config, unsigned threads) {
  validate(config);
  threads = std::max(1u, threads);

  std::vector<FrequencyProfile> profiles;
  const auto reference = reference_profile();
  for (const auto& s : config.samples) profiles.push_back(derive_profile(reference, s.eta, config.placement));

  const std::size_t steps = config.schedule.size();
  const std::size_t cells = steps * config.tests.size();
  std::vector<Moments> p_moments(cells);
  std::vector<std::size_t> rejections(cells, 0);

  // Replications run in chunks; each chunk is folded in replication order.
  const std::size_t chunk = std::max<std::size_t>(threads * 4, 8);
  std::vector<std::vector<double>> chunk_p(chunk);
  for (std::size_t base = 0; base < config.n_mc; base += chunk) {
    const std::size_t count = std::min(chunk, config.n_mc - base);
    if (threads == 1) {
      for (std::size_t i = 0; i < count; ++i) chunk_p[i] = run_replication(config, profiles, base + i);
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::atomic<bool> failed{false};
      {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
          workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
              try {
                chunk_p[i] = run_replication(config, profiles, base + i);
              } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
              }
            }
          });
        }
      }
      if (failure) std::rethrow_exception(failure);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto& p = chunk_p[i];
      for (std::size_t c = 0; c < cells; ++c) {
        if (std::isnan(p[c])) continue;
        p_moments[c].push(p[c]);
        if (p[c] < config.alpha) ++rejections[c];
      }
    }
  }

  CurveSet curves;
  for (const auto& s : config.samples) curves.labels.push_back(s.label);
  curves.tests = config.tests;
  curves.n_mc = config.n_mc;
  curves.rows.reserve(cells);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      const std::size_t c = s * config.tests.size() + t;
      CurveRow row;
      row.step = config.schedule.steps[s].k;
      row.gamma = config.schedule.steps[s].gamma;
      row.test = config.tests[t];
      row.n_valid = p_moments[c].n;
      row.rejections = rejections[c];
      if (row.n_valid == 0) {
        row.mean_p = row.p_lo = row.p_hi = kNaN;
        row.rejection_rate = row.rej_lo = row.rej_hi = kNaN;
      } else {
        row.mean_p = p_moments[c].mean;
        std::tie(row.p_lo, row.p_hi) = mean_band(p_moments[c], config.level);
        row.rejection_rate = static_cast<double>(row.rejections) / static_cast<double>(row.n_valid);
        std::tie(row.rej_lo, row.rej_hi) = rejection_band(row.rejections, row.n_valid, config.level);
      }
      curves.rows.push_back(row);
    }
  }
  return curves;
}

ScenarioConfig preset_scenario(std::string_view name, bool quick, std::uint64_t master_seed) {
  const std::size_t n = quick ? 2000 : 10000;
  ScenarioConfig config;
  if (name == "null-eq10") {
    config.samples = {{"X", 0, 1.0, n}, {"Y", 0, 1.0, n}, {"Z", 0, 1.0, n}};
  } else if (name == "alt-eq12") {
    config.samples = {{"X", 0, 1.0, n}, {"Y", 0, 1.2, n}, {"Z", 50, 1.0, n}};
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected null-eq10 or alt-eq12)");
  }
  config.n_mc = quick ? 200 : 1000;
  config.tests = standard_plan(config.samples.size());
  config.master_seed = master_seed;
  return config;
}

}  // namespace censormorph
