#pragma once

// Gaussian kernel density estimates of distance samples.

#include <cstddef>
#include <span>
#include <vector>

namespace censormorph {

struct DensityCurve {
  std::vector<double> grid;     ///< mm, increasing
  std::vector<double> density;  ///< per mm
  double bandwidth = 0.0;
  std::size_t n = 0;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5), IQR from linearly interpolated quantiles.
/// If the IQR is zero but sd is not, sd alone is used.
double silverman_bandwidth(std::span<const double> sample);

/// density(g) = 1/(n h) sum_i phi((g - x_i)/h).
DensityCurve gaussian_kde(std::span<const double> sample, double bandwidth, std::span<const double> grid);

/// `points` equally spaced values from min - 4h to max + 4h.
std::vector<double> default_grid(std::span<const double> sample, double bandwidth, std::size_t points = 512);

/// Equally spaced grid on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Trapezoid rule over the curve's grid.
double trapezoid_integral(const DensityCurve& curve);

}  // namespace censormorph
