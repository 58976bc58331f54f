#include "jcr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace jcr {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 44.0, kBottom = 56.0;

const char* const kPalette[] = {"#1f6fb2", "#c4452c", "#3a8f3d", "#7a4fa3",
                                "#b07d17", "#3aa4a0", "#b2488f", "#6b6b6b"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  if (v == 0.0) return "0";
  double a = std::fabs(v);
  char buf[64];
  if (a >= 1e4 || a < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.2e", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4g", v);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::string& name, const std::vector<double>& xs,
                         const std::vector<double>& ys) {
  series_.push_back({name, xs, ys, false});
}

void SvgPlot::add_markers(const std::string& name, const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  series_.push_back({name, xs, ys, true});
}

bool SvgPlot::empty() const {
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (std::isfinite(s.xs[i]) && std::isfinite(s.ys[i])) return false;
    }
  }
  return true;
}

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  }
  if (!(xmax >= xmin)) {  // no finite data at all
    xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(kWidth) << " "
      << fmt(kHeight) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"" << fmt(kWidth) << "\" height=\"" << fmt(kHeight)
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"26\" text-anchor=\"middle\" font-size=\"16\" "
         "fill=\"#222222\">"
      << escape(title_) << "</text>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = xmin + (xmax - xmin) * t / ticks;
    double fy = ymin + (ymax - ymin) * t / ticks;
    double gx = px(fx), gy = py(fy);
    out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(gx)
        << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(gy) << "\" x2=\""
        << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#444444\">" << fmt_tick(fx)
        << "</text>\n";
    out << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(gy + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#444444\">" << fmt_tick(fy)
        << "</text>\n";
  }
  out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 14)
      << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#222222\">" << escape(x_label_)
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#222222\" transform=\"rotate(-90 18 "
      << fmt(kTop + plot_h / 2) << ")\">" << escape(y_label_) << "</text>\n";

  int color_index = 0;
  double legend_y = kTop + 16.0;
  for (const auto& s : series_) {
    const char* color = kPalette[color_index % kPaletteSize];
    ++color_index;
    if (s.markers_only) {
      for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
        if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
        out << "<circle cx=\"" << fmt(px(s.xs[i])) << "\" cy=\"" << fmt(py(s.ys[i]))
            << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      }
    } else {
      bool open = false;
      std::ostringstream points;
      auto flush = [&]() {
        if (open) out << "<polyline fill=\"none\" stroke=\"" << color
                      << "\" stroke-width=\"1.8\" points=\"" << points.str() << "\"/>\n";
        points.str("");
        open = false;
      };
      for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
        if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) {
          flush();
          continue;
        }
        if (open) points << " ";
        points << fmt(px(s.xs[i])) << "," << fmt(py(s.ys[i]));
        open = true;
      }
      flush();
      for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
        if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
        out << "<circle cx=\"" << fmt(px(s.xs[i])) << "\" cy=\"" << fmt(py(s.ys[i]))
            << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
      }
    }
    out << "<line x1=\"" << fmt(kLeft + plot_w - 170) << "\" y1=\"" << fmt(legend_y - 4)
        << "\" x2=\"" << fmt(kLeft + plot_w - 150) << "\" y2=\"" << fmt(legend_y - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(kLeft + plot_w - 144) << "\" y=\"" << fmt(legend_y)
        << "\" font-size=\"11\" fill=\"#333333\">" << escape(s.name) << "</text>\n";
    legend_y += 16.0;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace jcr
