#include "censormorph/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "censormorph/errors.hpp"
#include "censormorph/stat_tests.hpp"

namespace censormorph {
namespace {

double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> sample) {
  if (sample.size() < 2) throw InsufficientData("bandwidth needs at least 2 observations");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(moments_of(sorted).variance());
  if (!(sd > 0.0)) throw ZeroSpread("sample is constant");
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(sorted.size()), -0.2);
}

DensityCurve gaussian_kde(std::span<const double> sample, double bandwidth, std::span<const double> grid) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw InvalidBandwidth("bandwidth must be positive");
  if (sample.empty()) throw InsufficientData("density estimate needs at least 1 observation");
  DensityCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.density.resize(grid.size());
  curve.bandwidth = bandwidth;
  curve.n = sample.size();
  const double scale = 1.0 / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (const double x : sample) {
      const double u = (grid[g] - x) / bandwidth;
      sum += std::exp(-0.5 * u * u);
    }
    curve.density[g] = scale * sum;
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo < hi)) throw InvalidParameter("grid needs >= 2 points and lo < hi");
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + static_cast<double>(i) * step;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_grid(std::span<const double> sample, double bandwidth, std::size_t points) {
  if (sample.empty()) throw InsufficientData("grid needs at least 1 observation");
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  return linear_grid(*lo - 4.0 * bandwidth, *hi + 4.0 * bandwidth, points);
}

double trapezoid_integral(const DensityCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    area += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  }
  return area;
}

}  // namespace censormorph
