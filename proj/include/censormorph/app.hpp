#pragma once

// Command implementations behind the censormorph CLI.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "censormorph/harness.hpp"
#include "censormorph/report.hpp"
#include "censormorph/simulator.hpp"

namespace censormorph::app {

struct CommonOptions {
  double delta = kDefaultDelta;
  double d_max = kDefaultDmax;
  double reliable_lo = kDefaultReliableLo;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::filesystem::path out_dir = ".";
  bool svg = true;
  bool quick = false;
};

/// Flag value if given, else CENSORMORPH_SEED, else 0. Throws ConfigError on a malformed variable.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct AnalyzeOptions {
  CommonOptions common;
  std::filesystem::path manifest;
  bool pooled = false;
  bool holm = false;
  std::size_t lilliefors_mc = 1000;
};

struct CommandOutcome {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notes;  ///< informational lines for stderr
};

struct AnalyzeOutcome : CommandOutcome {
  std::vector<AnalysisReport> reports;
};

/// Censored sweep (or pooled-only analysis) per hemisphere, written as
/// analysis_<hemisphere>.csv / pooled_<hemisphere>.csv plus optional SVGs.
AnalyzeOutcome run_analyze(const AnalyzeOptions& options);

struct SimulateOptions {
  GeneratorParams params;
  RemainderPlacement placement = RemainderPlacement::sorted;
  std::filesystem::path out;
};

CommandOutcome run_simulate(const SimulateOptions& options);

enum class McMode { size, power };

struct McOptions {
  CommonOptions common;
  McMode mode = McMode::size;
  std::optional<std::string> preset;   ///< defaults to null-eq10 (size) / alt-eq12 (power)
  std::vector<SampleSpec> samples;     ///< replaces the preset's samples when non-empty
  std::optional<std::size_t> n_mc;
  std::optional<std::size_t> n;
  RemainderPlacement placement = RemainderPlacement::sorted;
};

/// Parses "label:eta:r:n".
SampleSpec parse_sample_spec(const std::string& text);

struct McOutcome : CommandOutcome {
  CurveSet curves;
};

/// Writes mc_<mode>.csv and, with svg, one mc_<mode>_<index>.svg per test.
McOutcome run_mc(const McOptions& options);

struct KdeOptions {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> manifest;
  Hemisphere hemisphere = Hemisphere::left;
  std::optional<double> bandwidth;
  std::size_t grid_points = 512;
  bool count_scaled = false;
  std::filesystem::path out_dir = ".";
  bool svg = true;
};

struct KdeOutcome : CommandOutcome {
  std::vector<std::string> labels;
  std::vector<DensityCurve> curves;
};

/// One curve per input file (or per manifest group), on a shared grid, to kde.csv.
KdeOutcome run_kde(const KdeOptions& options);

}  // namespace censormorph::app
