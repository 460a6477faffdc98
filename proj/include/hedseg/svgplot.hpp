#pragma once

#include <string>
#include <vector>

namespace hedseg {

/// Minimal static SVG chart writer: scatter/line series on linear or log-10
/// x axes, plus vertical-bar histograms. Output bytes are deterministic.
class SvgChart {
 public:
  struct Series {
    std::string label;
    std::string color;
    bool draw_line = false;    // connect points
    bool draw_points = true;   // circles
    std::vector<std::pair<double, double>> points;
  };

  struct Bar {
    double x = 0;
    double height = 0;
  };

  SvgChart(std::string title, std::string x_label, std::string y_label);

  void set_log_x(bool log_x) { log_x_ = log_x; }
  void add_series(Series series) { series_.push_back(std::move(series)); }
  void add_bars(std::vector<Bar> bars, const std::string& color, double bar_width);

  void write(const std::string& path) const;

 private:
  std::string title_, x_label_, y_label_;
  bool log_x_ = false;
  std::vector<Series> series_;
  std::vector<Bar> bars_;
  std::string bar_color_;
  double bar_width_ = 1.0;
};

}  // namespace hedseg
