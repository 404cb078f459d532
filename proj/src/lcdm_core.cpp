#include "censormorph/lcdm_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "censormorph/errors.hpp"

namespace censormorph {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty() || token.front() == '+') return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

// Splits on '\n'; a single trailing newline does not produce an extra line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string_view to_string(Hemisphere h) noexcept { return h == Hemisphere::left ? "left" : "right"; }

std::optional<Hemisphere> parse_hemisphere(std::string_view token) noexcept {
  if (token == "left") return Hemisphere::left;
  if (token == "right") return Hemisphere::right;
  return std::nullopt;
}

std::vector<std::string> StudyManifest::groups() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.group) == out.end()) out.push_back(e.group);
  }
  return out;
}

std::vector<std::string> StudyManifest::groups(Hemisphere h) const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.hemisphere == h && std::find(out.begin(), out.end(), e.group) == out.end()) {
      out.push_back(e.group);
    }
  }
  return out;
}

DistanceSet make_distance_set(std::string subject_id, Hemisphere h, std::vector<double> distances) {
  std::sort(distances.begin(), distances.end());
  DistanceSet set;
  set.subject_id = std::move(subject_id);
  set.hemisphere = h;
  set.raw_count = distances.size();
  set.distances = std::move(distances);
  return set;
}

StudyManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  StudyManifest manifest;
  std::optional<double> clip_lo;
  std::optional<double> clip_hi;
  bool have_header = false;
  std::set<std::pair<std::string, Hemisphere>> seen;

  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key != "clip_lo" && key != "clip_hi" && key != "voxel_size") continue;
      const auto parsed = parse_real(value);
      if (!parsed) throw ParseError("bad value for '" + std::string(key) + "'", line_no);
      if (key == "clip_lo") clip_lo = *parsed;
      else if (key == "clip_hi") clip_hi = *parsed;
      else manifest.voxel_size_mm = *parsed;
      continue;
    }
    const auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() != 4 || fields[0] != "subject_id" || fields[1] != "group" ||
          fields[2] != "hemisphere" || fields[3] != "path") {
        throw ParseError("expected header 'subject_id,group,hemisphere,path'", line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 4) throw ParseError("expected 4 fields", line_no);
    const auto hemi = parse_hemisphere(fields[2]);
    if (!hemi) throw ParseError("unknown hemisphere '" + std::string(fields[2]) + "'", line_no);
    if (fields[0].empty() || fields[1].empty() || fields[3].empty()) {
      throw ParseError("empty field", line_no);
    }
    ManifestEntry entry{std::string(fields[0]), std::string(fields[1]), *hemi,
                        std::filesystem::path(std::string(fields[3]))};
    if (entry.path.is_relative() && !base_dir.empty()) entry.path = base_dir / entry.path;
    if (!seen.emplace(entry.subject_id, entry.hemisphere).second) {
      throw DuplicateEntry("subject '" + entry.subject_id + "' listed twice for the " +
                           std::string(to_string(entry.hemisphere)) + " hemisphere");
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (manifest.entries.empty()) throw EmptyManifest("no entries");
  if (clip_lo) manifest.clip_lo_mm = *clip_lo;
  if (clip_hi) manifest.clip_hi_mm = *clip_hi;
  if (!(manifest.clip_lo_mm < manifest.clip_hi_mm)) {
    throw InvalidRange("clip_lo must be below clip_hi");
  }
  return manifest;
}

StudyManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

std::vector<double> parse_distances(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw EmptyFile("no distances");
  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto token = trim(lines[i]);
    if (token.empty()) throw ParseError("blank line", i + 1);
    const auto value = parse_real(token);
    if (!value) throw ParseError("not a real number: '" + std::string(token) + "'", i + 1);
    values.push_back(*value);
  }
  return values;
}

DistanceSet load_distances(const std::filesystem::path& path, std::string subject_id, Hemisphere h) {
  try {
    return make_distance_set(std::move(subject_id), h, parse_distances(read_file(path)));
  } catch (const EmptyFile&) {
    throw EmptyFile("'" + path.string() + "' has no distances");
  }
}

DistanceSet clip(const DistanceSet& set, double lo, double hi) {
  if (!(lo < hi)) throw InvalidRange("lo must be below hi");
  DistanceSet out;
  out.subject_id = set.subject_id;
  out.hemisphere = set.hemisphere;
  const auto first = std::lower_bound(set.distances.begin(), set.distances.end(), lo);
  const auto last = std::upper_bound(first, set.distances.end(), hi);
  out.distances.assign(first, last);
  out.clipped_count = set.clipped_count + (set.distances.size() - out.distances.size());
  out.raw_count = set.raw_count;
  return out;
}

PooledSample pool(std::span<const DistanceSet> sets, std::string group, Hemisphere h) {
  if (sets.empty()) throw EmptyCollection("no distance sets to pool");
  std::size_t total = 0;
  for (const auto& s : sets) {
    if (s.hemisphere != h) {
      throw HemisphereMismatch("subject '" + s.subject_id + "' is not on the " +
                               std::string(to_string(h)) + " hemisphere");
    }
    total += s.distances.size();
  }
  PooledSample out;
  out.group = std::move(group);
  out.hemisphere = h;
  out.subject_count = sets.size();
  out.distances.reserve(total);
  for (const auto& s : sets) out.distances.insert(out.distances.end(), s.distances.begin(), s.distances.end());
  std::sort(out.distances.begin(), out.distances.end());
  return out;
}

std::string format_real(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_distances(std::span<const double> distances) {
  std::string out;
  out.reserve(distances.size() * 9);
  for (const double d : distances) {
    out += format_real(d);
    out += '\n';
  }
  return out;
}

void write_distances(const std::filesystem::path& path, std::span<const double> distances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'", 0);
  out << format_distances(distances);
}

LoadedHemisphere load_hemisphere(const StudyManifest& manifest, Hemisphere h) {
  LoadedHemisphere loaded;
  for (const auto& group : manifest.groups(h)) {
    std::vector<DistanceSet> sets;
    for (const auto& e : manifest.entries) {
      if (e.hemisphere != h || e.group != group) continue;
      auto raw = load_distances(e.path, e.subject_id, h);
      sets.push_back(clip(raw, manifest.clip_lo_mm, manifest.clip_hi_mm));
      loaded.raw_count += sets.back().raw_count;
      loaded.clipped_count += sets.back().clipped_count;
    }
    loaded.groups.push_back(pool(sets, group, h));
  }
  return loaded;
}

}  // namespace censormorph
