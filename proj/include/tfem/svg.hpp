#pragma once

// Minimal log-log SVG plotter for the study CSVs: one polyline+markers per
// series, optional guide lines of fixed slope. Pure post-processing; never
// feeds back into any numerical output.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace tfem {

struct PlotSeries {
  std::string label;
  std::string color = "#1f4e9c";
  std::vector<double> x, y;
};

struct GuideSlope {
  double slope = 2.0;
  double x0 = 0.0, y0 = 0.0;  // anchor point
  double x1 = 0.0;            // end abscissa
  std::string label;
};

class LogLogPlot {
 public:
  LogLogPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add_series(PlotSeries s) { series_.push_back(std::move(s)); }
  void add_guide(GuideSlope g) { guides_.push_back(std::move(g)); }

  void write(const std::string& path) const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.x[i] <= 0 || s.y[i] <= 0) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    if (xmin >= xmax) { xmin = 0.1; xmax = 1.0; }
    if (ymin >= ymax) { ymin = 0.1; ymax = 1.0; }
    const double lx0 = std::log10(xmin) - 0.05, lx1 = std::log10(xmax) + 0.05;
    const double ly0 = std::log10(ymin) - 0.1, ly1 = std::log10(ymax) + 0.1;

    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    auto X = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (H - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title_
        << "</text>\n";
    svg << "<text x='" << W / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='13'>"
        << xlabel_ << "</text>\n";
    svg << "<text x='16' y='" << H / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
        << H / 2 << ")'>" << ylabel_ << "</text>\n";
    svg << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr << "' height='"
        << H - mt - mb << "' fill='none' stroke='black'/>\n";

    // decade grid + tick labels
    for (int e = int(std::ceil(lx0)); e <= int(std::floor(lx1)); ++e) {
      const double x = X(std::pow(10.0, e));
      svg << "<line x1='" << x << "' y1='" << mt << "' x2='" << x << "' y2='" << H - mb
          << "' stroke='#ddd'/>\n";
      svg << "<text x='" << x << "' y='" << H - mb + 16 << "' text-anchor='middle' font-size='11'>1e"
          << e << "</text>\n";
    }
    for (int e = int(std::ceil(ly0)); e <= int(std::floor(ly1)); ++e) {
      const double y = Y(std::pow(10.0, e));
      svg << "<line x1='" << ml << "' y1='" << y << "' x2='" << W - mr << "' y2='" << y
          << "' stroke='#ddd'/>\n";
      svg << "<text x='" << ml - 6 << "' y='" << y + 4 << "' text-anchor='end' font-size='11'>1e" << e
          << "</text>\n";
    }

    for (const auto& g : guides_) {
      const double y1 = g.y0 * std::pow(g.x1 / g.x0, g.slope);
      svg << "<line x1='" << X(g.x0) << "' y1='" << Y(g.y0) << "' x2='" << X(g.x1) << "' y2='"
          << Y(y1) << "' stroke='#444' stroke-dasharray='6 3'/>\n";
      svg << "<text x='" << X(g.x1) + 4 << "' y='" << Y(y1) << "' font-size='11' fill='#444'>"
          << (g.label.empty() ? "slope " + std::to_string(g.slope) : g.label) << "</text>\n";
    }

    int li = 0;
    for (const auto& s : series_) {
      svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0 && s.y[i] > 0) svg << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
      svg << "'/>\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0 && s.y[i] > 0)
          svg << "<circle cx='" << X(s.x[i]) << "' cy='" << Y(s.y[i]) << "' r='3' fill='" << s.color
              << "'/>\n";
      svg << "<text x='" << W - mr - 8 << "' y='" << mt + 16 + 14 * li++
          << "' text-anchor='end' font-size='12' fill='" << s.color << "'>" << s.label
          << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    out << svg.str();
  }

 private:
  std::string title_, xlabel_, ylabel_;
  std::vector<PlotSeries> series_;
  std::vector<GuideSlope> guides_;
};

inline const char* series_color(int i) {
  static const char* colors[] = {"#1f4e9c", "#d9541e", "#c02942", "#7a4419",
                                 "#4a7c2f", "#6b3fa0", "#777777", "#0f8a8a"};
  return colors[i % 8];
}

}  // namespace tfem
