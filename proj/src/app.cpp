#include "censormorph/app.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "censormorph/errors.hpp"

namespace censormorph::app {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create '" + dir.string() + "': " + ec.message());
}

template <typename T>
T parse_number(std::string_view token, const std::string& what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) throw ConfigError("bad " + what + " '" + std::string(token) + "'");
  return value;
}

CensoringSchedule schedule_of(const CommonOptions& c) { return make_schedule(c.delta, c.d_max, c.reliable_lo); }

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CENSORMORPH_SEED"); env && *env) {
    return parse_number<std::uint64_t>(env, "CENSORMORPH_SEED");
  }
  return 0;
}

AnalyzeOutcome run_analyze(const AnalyzeOptions& options) {
  const auto manifest = load_manifest(options.manifest);
  const auto schedule = schedule_of(options.common);
  AnalyzeOutcome outcome;
  if (manifest.voxel_size_mm && options.common.delta > *manifest.voxel_size_mm) {
    outcome.notes.push_back("warning: bin size " + format_real(options.common.delta) +
                            " mm exceeds the voxel size " + format_real(*manifest.voxel_size_mm) + " mm");
  }
  ensure_dir(options.common.out_dir);

  for (const auto h : {Hemisphere::left, Hemisphere::right}) {
    if (manifest.groups(h).empty()) continue;
    if (manifest.groups(h).size() < 2) {
      throw SingleGroup("the " + std::string(to_string(h)) + " hemisphere has only one group");
    }
    const auto loaded = load_hemisphere(manifest, h);
    outcome.notes.push_back(std::string(to_string(h)) + ": clipped " + std::to_string(loaded.clipped_count) + " of " +
                            std::to_string(loaded.raw_count) + " distances (" +
                            format_real(100.0 * loaded.clipped_fraction()) + "%)");

    AnalysisReport report;
    std::string stem;
    if (options.pooled) {
      PooledOptions pooled;
      pooled.lilliefors_mc = options.common.quick ? std::min<std::size_t>(options.lilliefors_mc, 200)
                                                  : options.lilliefors_mc;
      pooled.seed = options.common.seed;
      pooled.holm = options.holm;
      report = pooled_report(loaded.groups, schedule, pooled);
      stem = "pooled_" + std::string(to_string(h));
    } else {
      report = censored_report(loaded.groups, schedule);
      stem = "analysis_" + std::string(to_string(h));
    }
    const auto csv_path = options.common.out_dir / (stem + ".csv");
    write_text(csv_path, analysis_csv(report));
    outcome.files.push_back(csv_path);
    if (options.common.svg && !options.pooled) {
      for (const auto kind : {TestKind::kruskal_wallis, TestKind::anova_f_hov, TestKind::anova_f_welch,
                              TestKind::wilcoxon, TestKind::welch_t}) {
        const auto svg_path = options.common.out_dir / (stem + "_" + std::string(to_string(kind)) + ".svg");
        write_text(svg_path, analysis_svg(report, kind, options.common.alpha, schedule.d_max));
        outcome.files.push_back(svg_path);
      }
    }
    outcome.reports.push_back(std::move(report));
  }
  if (outcome.reports.empty()) throw EmptyManifest("no hemisphere to analyze");
  return outcome;
}

CommandOutcome run_simulate(const SimulateOptions& options) {
  const auto set = simulate(options.params, options.placement);
  if (options.out.has_parent_path()) ensure_dir(options.out.parent_path());
  write_distances(options.out, set.distances);
  CommandOutcome outcome;
  outcome.files.push_back(options.out);
  return outcome;
}

SampleSpec parse_sample_spec(const std::string& text) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  for (auto colon = rest.find(':'); colon != std::string_view::npos; colon = rest.find(':')) {
    parts.push_back(rest.substr(0, colon));
    rest.remove_prefix(colon + 1);
  }
  parts.push_back(rest);
  if (parts.size() != 4 || parts[0].empty()) throw ConfigError("sample spec must be label:eta:r:n, got '" + text + "'");
  return {std::string(parts[0]), parse_number<std::int64_t>(parts[1], "eta"), parse_number<double>(parts[2], "r"),
          parse_number<std::size_t>(parts[3], "n")};
}

McOutcome run_mc(const McOptions& options) {
  const auto& common = options.common;
  const std::string preset = options.preset.value_or(options.mode == McMode::size ? "null-eq10" : "alt-eq12");
  auto config = preset_scenario(preset, common.quick, common.seed);
  if (!options.samples.empty()) {
    config.samples = options.samples;
    config.tests = standard_plan(config.samples.size());
  }
  if (options.n) {
    for (auto& s : config.samples) s.n = *options.n;
  }
  if (options.n_mc) config.n_mc = *options.n_mc;
  config.alpha = common.alpha;
  config.schedule = schedule_of(common);
  config.placement = options.placement;

  McOutcome outcome;
  outcome.curves = run_scenario(config, common.threads);
  ensure_dir(common.out_dir);
  const std::string stem = options.mode == McMode::size ? "mc_size" : "mc_power";
  const auto csv_path = common.out_dir / (stem + ".csv");
  write_text(csv_path, curves_csv(outcome.curves));
  outcome.files.push_back(csv_path);
  if (common.svg) {
    for (std::size_t t = 0; t < outcome.curves.tests.size(); ++t) {
      const auto svg_path = common.out_dir / (stem + "_" + std::to_string(t) + ".svg");
      write_text(svg_path, curves_svg(outcome.curves, t, common.alpha, config.schedule.d_max));
      outcome.files.push_back(svg_path);
    }
  }
  return outcome;
}

KdeOutcome run_kde(const KdeOptions& options) {
  std::vector<std::vector<double>> samples;
  KdeOutcome outcome;
  if (options.manifest) {
    const auto manifest = load_manifest(*options.manifest);
    auto loaded = load_hemisphere(manifest, options.hemisphere);
    for (auto& g : loaded.groups) {
      outcome.labels.push_back(g.group);
      samples.push_back(std::move(g.distances));
    }
  }
  for (const auto& path : options.inputs) {
    outcome.labels.push_back(path.stem().string());
    samples.push_back(load_distances(path, path.stem().string(), Hemisphere::left).distances);
  }
  if (samples.empty()) throw ConfigError("no input samples");

  std::vector<double> bandwidths;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double h = options.bandwidth ? *options.bandwidth : silverman_bandwidth(s);
    bandwidths.push_back(h);
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    lo = i == 0 ? *mn - 4.0 * h : std::min(lo, *mn - 4.0 * h);
    hi = i == 0 ? *mx + 4.0 * h : std::max(hi, *mx + 4.0 * h);
    total += s.size();
  }
  const auto grid = linear_grid(lo, hi, options.grid_points);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto curve = gaussian_kde(samples[i], bandwidths[i], grid);
    if (options.count_scaled) {
      const double share = static_cast<double>(samples[i].size()) / static_cast<double>(total);
      for (auto& d : curve.density) d *= share;
    }
    outcome.curves.push_back(std::move(curve));
  }
  ensure_dir(options.out_dir);
  const auto csv_path = options.out_dir / "kde.csv";
  write_text(csv_path, density_csv(outcome.labels, outcome.curves));
  outcome.files.push_back(csv_path);
  if (options.svg) {
    const auto svg_path = options.out_dir / "kde.svg";
    write_text(svg_path, density_svg(outcome.labels, outcome.curves));
    outcome.files.push_back(svg_path);
  }
  return outcome;
}

}  // namespace censormorph::app
