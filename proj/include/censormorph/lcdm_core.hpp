#pragma once

// Labeled cortical distance map data model: per-subject distance files, the
// study manifest, range clipping and pooling of subjects by group.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace censormorph {

enum class Hemisphere { left, right };

std::string_view to_string(Hemisphere h) noexcept;
/// Accepts exactly "left" or "right".
std::optional<Hemisphere> parse_hemisphere(std::string_view token) noexcept;

inline constexpr double kDefaultClipLo = -0.5;
inline constexpr double kDefaultClipHi = 5.5;

struct ManifestEntry {
  std::string subject_id;
  std::string group;
  Hemisphere hemisphere = Hemisphere::left;
  std::filesystem::path path;
};

struct StudyManifest {
  std::vector<ManifestEntry> entries;
  std::optional<double> voxel_size_mm;
  double clip_lo_mm = kDefaultClipLo;
  double clip_hi_mm = kDefaultClipHi;

  /// Group labels in order of first appearance.
  std::vector<std::string> groups() const;
  /// Groups that have at least one entry for `h`, in order of first appearance.
  std::vector<std::string> groups(Hemisphere h) const;
};

/// One subject-hemisphere's signed distances (mm), sorted non-decreasing.
struct DistanceSet {
  std::string subject_id;
  Hemisphere hemisphere = Hemisphere::left;
  std::vector<double> distances;
  std::size_t clipped_count = 0;
  std::size_t raw_count = 0;

  std::size_t size() const noexcept { return distances.size(); }
};

/// All distances of one group on one hemisphere, merged and sorted.
struct PooledSample {
  std::string group;
  Hemisphere hemisphere = Hemisphere::left;
  std::vector<double> distances;
  std::size_t subject_count = 0;

  std::size_t size() const noexcept { return distances.size(); }
  std::span<const double> view() const noexcept { return distances; }
};

/// Builds a DistanceSet, sorting `distances`.
DistanceSet make_distance_set(std::string subject_id, Hemisphere h, std::vector<double> distances);

/// Reads a manifest CSV. Relative paths resolve against the manifest's directory.
StudyManifest load_manifest(const std::filesystem::path& path);
/// Parses manifest text; relative entry paths resolve against `base_dir`.
StudyManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});

/// One decimal real per line; blank lines are rejected.
DistanceSet load_distances(const std::filesystem::path& path, std::string subject_id, Hemisphere h);
std::vector<double> parse_distances(std::string_view text);

/// Keeps lo <= d <= hi.
DistanceSet clip(const DistanceSet& set, double lo, double hi);

/// Merges all sets into one sorted multiset. Result does not depend on input order.
PooledSample pool(std::span<const DistanceSet> sets, std::string group, Hemisphere h);

/// Six significant digits, the precision used by every text output.
std::string format_real(double value);
std::string format_distances(std::span<const double> distances);
void write_distances(const std::filesystem::path& path, std::span<const double> distances);

struct LoadedHemisphere {
  std::vector<PooledSample> groups;  ///< manifest group order
  std::size_t raw_count = 0;
  std::size_t clipped_count = 0;

  double clipped_fraction() const noexcept {
    return raw_count ? static_cast<double>(clipped_count) / static_cast<double>(raw_count) : 0.0;
  }
};

/// Loads, clips and pools every entry of `manifest` on hemisphere `h`.
LoadedHemisphere load_hemisphere(const StudyManifest& manifest, Hemisphere h);

}  // namespace censormorph
