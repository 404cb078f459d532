#pragma once

// Minimal SVG line charts: polylines, shaded bands and horizontal guides on
// [0, x_max] x [0, 1] axes, arranged as side-by-side panels.

#include <string>
#include <vector>

namespace censormorph::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#000000";
  bool dashed = false;
};

/// Filled region between `lo` and `hi` along `x`.
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#888888";
};

struct Panel {
  std::string title;
  std::string x_label = "censoring distance (mm)";
  std::string y_label;
  double x_min = 0.0;
  double x_max = 5.5;
  double x_tick = 0.5;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<double> guides;  ///< horizontal dashed lines
  std::vector<Band> bands;
  std::vector<Series> series;
};

/// Colour for the i-th series.
std::string palette(std::size_t i);

/// Panels are laid out left to right. NaN points break a polyline.
std::string render(const std::vector<Panel>& panels);

}  // namespace censormorph::svg
