#include "censormorph/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace censormorph::svg {
namespace {

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double origin_x;
  const Panel& panel;

  double px(double x) const {
    return origin_x + kLeft + (x - panel.x_min) / (panel.x_max - panel.x_min) * (kPanelWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kTop + (panel.y_max - y) / (panel.y_max - panel.y_min) * (kPanelHeight - kTop - kBottom);
  }
};

void render_panel(std::string& out, const Panel& panel, double origin_x) {
  const Frame f{origin_x, panel};
  const double x0 = f.px(panel.x_min);
  const double x1 = f.px(panel.x_max);
  const double y0 = f.py(panel.y_min);
  const double y1 = f.py(panel.y_max);

  out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(panel.title) + "</text>\n";
  out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
         num(y0 - y1) + "\" fill=\"none\" stroke=\"#000\"/>\n";

  for (double t = panel.x_min; t <= panel.x_max + 1e-9; t += panel.x_tick) {
    out += "<line x1=\"" + num(f.px(t)) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(f.px(t)) + "\" y2=\"" +
           num(y0 + 5) + "\" stroke=\"#000\"/>\n";
    out += "<text x=\"" + num(f.px(t)) + "\" y=\"" + num(y0 + 18) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + num(t).substr(0, num(t).size() - 1) + "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double t = panel.y_min + (panel.y_max - panel.y_min) * i / 4.0;
    out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(f.py(t)) + "\" x2=\"" + num(x0) + "\" y2=\"" +
           num(f.py(t)) + "\" stroke=\"#000\"/>\n";
    out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(f.py(t) + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
           num(t) + "</text>\n";
  }
  out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kPanelHeight - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.x_label) + "</text>\n";
  out += "<text transform=\"translate(" + num(origin_x + 16) + "," + num((y0 + y1) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.y_label) + "</text>\n";

  for (const auto& band : panel.bands) {
    std::string points;
    for (std::size_t i = 0; i < band.x.size(); ++i) {
      if (std::isnan(band.hi[i])) continue;
      points += num(f.px(band.x[i])) + "," + num(f.py(band.hi[i])) + " ";
    }
    for (std::size_t i = band.x.size(); i-- > 0;) {
      if (std::isnan(band.lo[i])) continue;
      points += num(f.px(band.x[i])) + "," + num(f.py(band.lo[i])) + " ";
    }
    out += "<polygon points=\"" + points + "\" fill=\"" + band.color + "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
  }
  for (const double g : panel.guides) {
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(f.py(g)) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(f.py(g)) +
           "\" stroke=\"#555\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (std::size_t s = 0; s < panel.series.size(); ++s) {
    const auto& series = panel.series[s];
    const std::string style = "fill=\"none\" stroke=\"" + series.color + "\" stroke-width=\"1.2\"" +
                              (series.dashed ? " stroke-dasharray=\"5,3\"" : "");
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) out += "<polyline " + style + " points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      if (std::isnan(series.y[i])) {
        flush();
        continue;
      }
      points += num(f.px(series.x[i])) + "," + num(f.py(std::clamp(series.y[i], panel.y_min, panel.y_max))) + " ";
    }
    flush();
    if (!series.label.empty()) {
      const double ly = y1 + 14.0 + 14.0 * static_cast<double>(s);
      out += "<line x1=\"" + num(x1 - 120) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(x1 - 100) + "\" y2=\"" +
             num(ly - 4) + "\" " + style + "/>\n";
      out += "<text x=\"" + num(x1 - 96) + "\" y=\"" + num(ly) + "\" font-size=\"10\">" + escape(series.label) +
             "</text>\n";
    }
  }
}

}  // namespace

std::string palette(std::size_t i) {
  static constexpr std::array<const char*, 8> colors{"#000000", "#d62728", "#1f77b4", "#2ca02c",
                                                     "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  return colors[i % colors.size()];
}

std::string render(const std::vector<Panel>& panels) {
  const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                    num(kPanelHeight) + "\" viewBox=\"0 0 " + num(width) + " " + num(kPanelHeight) +
                    "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) render_panel(out, panels[i], kPanelWidth * static_cast<double>(i));
  out += "</svg>\n";
  return out;
}

}  // namespace censormorph::svg
