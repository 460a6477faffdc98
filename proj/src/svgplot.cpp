#include "hedseg/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hedseg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 52;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  if (v != 0.0 && (std::fabs(v) < 1e-2 || std::fabs(v) >= 1e4))
    std::snprintf(buf, sizeof(buf), "%.1e", v);
  else
    std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_bars(std::vector<Bar> bars, const std::string& color, double bar_width) {
  bars_ = std::move(bars);
  bar_color_ = color;
  bar_width_ = bar_width;
}

void SvgChart::write(const std::string& path) const {
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = 0.0, y_max = -std::numeric_limits<double>::infinity();
  const auto expand = [&](double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_max = std::max(y_max, y);
  };
  for (const Series& s : series_)
    for (const auto& [x, y] : s.points) expand(x, y);
  for (const Bar& b : bars_) {
    expand(b.x - bar_width_ / 2, b.height);
    expand(b.x + bar_width_ / 2, b.height);
  }
  if (!(x_max >= x_min)) {
    x_min = 0;
    x_max = 1;
  }
  if (!(y_max > y_min)) y_max = y_min + 1;
  y_max *= 1.05;
  if (log_x_ && x_min <= 0) throw std::invalid_argument("SvgChart: log axis needs positive x");
  if (x_max == x_min) x_max = x_min + (log_x_ ? x_min : 1.0);

  const double lx_min = log_x_ ? std::log10(x_min) : x_min;
  const double lx_max = log_x_ ? std::log10(x_max) : x_max;
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    const double t = ((log_x_ ? std::log10(x) : x) - lx_min) / (lx_max - lx_min);
    return kMarginLeft + t * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
      << "font-family=\"sans-serif\">" << title_ << "</text>\n";

  // Axes.
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kHeight - kMarginBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
      << kWidth - kMarginRight << "\" y2=\"" << kHeight - kMarginBottom
      << "\" stroke=\"black\"/>\n";

  // Ticks: 5 on each axis (log-x uses decade ticks).
  const int ticks = 5;
  if (log_x_) {
    const int d0 = static_cast<int>(std::ceil(lx_min - 1e-9));
    const int d1 = static_cast<int>(std::floor(lx_max + 1e-9));
    for (int d = d0; d <= d1; ++d) {
      const double x = std::pow(10.0, d);
      out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
          << fmt(px(x)) << "\" y2=\"" << kHeight - kMarginBottom + 5 << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kHeight - kMarginBottom + 18
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">1e" << d
          << "</text>\n";
    }
  } else {
    for (int i = 0; i <= ticks; ++i) {
      const double x = x_min + (x_max - x_min) * i / ticks;
      out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
          << fmt(px(x)) << "\" y2=\"" << kHeight - kMarginBottom + 5 << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kHeight - kMarginBottom + 18
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
          << fmt_tick(x) << "</text>\n";
    }
  }
  for (int i = 0; i <= ticks; ++i) {
    const double y = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(py(y) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt_tick(y)
        << "</text>\n";
  }

  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label_
      << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label_ << "</text>\n";

  for (const Bar& b : bars_) {
    const double x0 = px(b.x - bar_width_ / 2);
    const double x1 = px(b.x + bar_width_ / 2);
    const double top = py(b.height);
    out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(x1 - x0)
        << "\" height=\"" << fmt(py(0.0) - top) << "\" fill=\"" << bar_color_
        << "\" fill-opacity=\"0.7\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }

  int legend_y = kMarginTop + 8;
  for (const Series& s : series_) {
    if (s.draw_line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) out << fmt(px(x)) << "," << fmt(py(y)) << " ";
      out << "\"/>\n";
    }
    if (s.draw_points) {
      for (const auto& [x, y] : s.points)
        out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
            << "\" r=\"2.5\" fill=\"" << s.color << "\" fill-opacity=\"0.65\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<rect x=\"" << kWidth - kMarginRight - 130 << "\" y=\"" << legend_y - 9
          << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n"
          << "<text x=\"" << kWidth - kMarginRight - 115 << "\" y=\"" << legend_y
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
      legend_y += 18;
    }
  }

  out << "</svg>\n";

  std::ofstream file(path);
  if (!file) throw std::runtime_error("SvgChart: cannot open " + path);
  file << out.str();
}

}  // namespace hedseg
