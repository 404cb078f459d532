// censormorph: censored distance analysis, simulation, size/power curves and KDE.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "censormorph/app.hpp"
#include "censormorph/errors.hpp"

namespace {

using namespace censormorph;

struct SharedFlags {
  app::CommonOptions options;
  std::optional<std::uint64_t> seed;
};

void add_shared(CLI::App& cmd, SharedFlags& flags) {
  auto& o = flags.options;
  cmd.add_option("--delta", o.delta, "censoring bin size in mm")->capture_default_str();
  cmd.add_option("--dmax", o.d_max, "largest censoring distance in mm")->capture_default_str();
  cmd.add_option("--reliable-lo", o.reliable_lo, "start of the reliable reporting window in mm")->capture_default_str();
  cmd.add_option("--alpha", o.alpha, "significance level")->capture_default_str();
  cmd.add_option("--seed", flags.seed, "random seed (falls back to CENSORMORPH_SEED)");
  cmd.add_option("--threads", o.threads, "worker threads; results do not depend on it")->capture_default_str();
  cmd.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  cmd.add_flag("--svg,!--no-svg", o.svg, "write SVG figures");
  cmd.add_flag("--quick", o.quick, "desk-scale run (n=2000, N_mc=200 for presets)");
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::usage: return 1;
    case ErrorCategory::data: return 2;
    case ErrorCategory::numerical: return 3;
  }
  return 3;
}

void print_notes(const app::CommandOutcome& outcome) {
  for (const auto& n : outcome.notes) std::cerr << n << '\n';
  for (const auto& f : outcome.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Censored labeled-cortical-distance-map analysis"};
  cli.require_subcommand(1);

  SharedFlags analyze_flags;
  app::AnalyzeOptions analyze;
  auto* analyze_cmd = cli.add_subcommand("analyze", "censored multi-test sweep over a study manifest");
  analyze_cmd->add_option("manifest", analyze.manifest, "manifest CSV")->required();
  analyze_cmd->add_flag("--pooled", analyze.pooled, "pooled-only analysis with K-S and Lilliefors");
  analyze_cmd->add_flag("--holm", analyze.holm, "Holm-adjust pairwise rows (pooled mode)");
  analyze_cmd->add_option("--lilliefors-mc", analyze.lilliefors_mc, "Lilliefors Monte Carlo size")->capture_default_str();
  add_shared(*analyze_cmd, analyze_flags);

  app::SimulateOptions simulate;
  std::optional<std::uint64_t> simulate_seed;
  std::string simulate_placement = "sorted";
  auto* simulate_cmd = cli.add_subcommand("simulate", "generate a stacked-uniform distance sample");
  simulate_cmd->add_option("--eta", simulate.params.eta, "stack shift")->capture_default_str();
  simulate_cmd->add_option("--r", simulate.params.r, "uniform offset width, in (0, 2)")->capture_default_str();
  simulate_cmd->add_option("--n", simulate.params.n, "sample size")->capture_default_str();
  simulate_cmd->add_option("--seed", simulate_seed, "random seed (falls back to CENSORMORPH_SEED)");
  simulate_cmd->add_option("--placement", simulate_placement, "remainder stack placement: sorted|append")
      ->capture_default_str();
  simulate_cmd->add_option("--out,-o", simulate.out, "output distance file")->required();

  SharedFlags mc_flags;
  app::McOptions mc;
  std::string mc_mode;
  std::vector<std::string> mc_samples;
  std::string mc_placement = "sorted";
  std::optional<std::size_t> mc_n_mc;
  std::optional<std::size_t> mc_n;
  std::optional<std::string> mc_preset;
  auto* mc_cmd = cli.add_subcommand("mc", "Monte Carlo size or power curves");
  mc_cmd->add_option("mode", mc_mode, "size or power")->required()->check(CLI::IsMember({"size", "power"}));
  mc_cmd->add_option("--preset", mc_preset, "null-eq10 or alt-eq12");
  mc_cmd->add_option("--sample", mc_samples, "explicit sample label:eta:r:n (repeatable)");
  mc_cmd->add_option("--n-mc", mc_n_mc, "number of replications");
  mc_cmd->add_option("--n", mc_n, "sample size for every sample");
  mc_cmd->add_option("--placement", mc_placement, "remainder stack placement: sorted|append")->capture_default_str();
  add_shared(*mc_cmd, mc_flags);

  app::KdeOptions kde;
  std::optional<std::string> kde_manifest;
  std::string kde_hemisphere = "left";
  std::vector<std::string> kde_inputs;
  auto* kde_cmd = cli.add_subcommand("kde", "Gaussian kernel density estimates");
  kde_cmd->add_option("inputs", kde_inputs, "distance files, one curve each");
  kde_cmd->add_option("--manifest", kde_manifest, "pool a manifest by group instead of (or besides) files");
  kde_cmd->add_option("--hemisphere", kde_hemisphere, "hemisphere for --manifest")->capture_default_str();
  kde_cmd->add_option("--bandwidth", kde.bandwidth, "bandwidth in mm (default: Silverman)");
  kde_cmd->add_option("--grid-points", kde.grid_points, "grid size")->capture_default_str();
  kde_cmd->add_flag("--count-scaled", kde.count_scaled, "scale each curve by its share of all distances");
  kde_cmd->add_option("--out-dir", kde.out_dir, "output directory")->capture_default_str();
  kde_cmd->add_flag("--svg,!--no-svg", kde.svg, "write an SVG figure");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze_cmd) {
      analyze.common = analyze_flags.options;
      analyze.common.seed = app::resolve_seed(analyze_flags.seed);
      print_notes(app::run_analyze(analyze));
    } else if (*simulate_cmd) {
      simulate.params.seed = app::resolve_seed(simulate_seed);
      const auto placement = parse_remainder_placement(simulate_placement);
      if (!placement) throw ConfigError("placement must be sorted or append");
      simulate.placement = *placement;
      print_notes(app::run_simulate(simulate));
    } else if (*mc_cmd) {
      mc.common = mc_flags.options;
      mc.common.seed = app::resolve_seed(mc_flags.seed);
      mc.mode = mc_mode == "size" ? app::McMode::size : app::McMode::power;
      mc.preset = mc_preset;
      for (const auto& s : mc_samples) mc.samples.push_back(app::parse_sample_spec(s));
      mc.n_mc = mc_n_mc;
      mc.n = mc_n;
      const auto placement = parse_remainder_placement(mc_placement);
      if (!placement) throw ConfigError("placement must be sorted or append");
      mc.placement = *placement;
      print_notes(app::run_mc(mc));
    } else if (*kde_cmd) {
      if (kde_manifest) kde.manifest = *kde_manifest;
      const auto h = parse_hemisphere(kde_hemisphere);
      if (!h) throw ConfigError("hemisphere must be left or right");
      kde.hemisphere = *h;
      for (const auto& i : kde_inputs) kde.inputs.emplace_back(i);
      print_notes(app::run_kde(kde));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
