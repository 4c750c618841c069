#include "pocs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pocs {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 736.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 444.0;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Tick step of the form {1,2,5}x10^k giving 4..8 intervals over the range.
double nice_step(double range) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= mult * mag) return mult * mag;
  }
  return 10.0 * mag;
}

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void absorb(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double margin = 0.05 * (hi - lo);
      lo -= margin;
      hi += margin;
    }
  }
};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series) {
  Extent xe, ye;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xe.absorb(p[0]);
      ye.absorb(p[1]);
    }
  }
  xe.pad();
  ye.pad();

  const auto px = [&](double x) {
    return kLeft + (x - xe.lo) / (xe.hi - xe.lo) * (kRight - kLeft);
  };
  const auto py = [&](double y) {
    return kBottom - (y - ye.lo) / (ye.hi - ye.lo) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(title) + "</text>\n";

  const double x_step = nice_step(xe.hi - xe.lo);
  for (double t = std::ceil(xe.lo / x_step) * x_step; t <= xe.hi + 1e-9 * x_step; t += x_step) {
    const double gx = px(t);
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(gx) + "\" y2=\"" +
           num(kBottom) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(kBottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           tick_label(t) + "</text>\n";
  }
  const double y_step = nice_step(ye.hi - ye.lo);
  for (double t = std::ceil(ye.lo / y_step) * y_step; t <= ye.hi + 1e-9 * y_step; t += y_step) {
    const double gy = py(t);
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kRight) +
           "\" y2=\"" + num(gy) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + tick_label(t) +
           "</text>\n";
  }

  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"" + num(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + num((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
         num((kTop + kBottom) / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (const auto& s : series) {
    if (s.points.empty()) continue;
    std::string path = "<polyline fill=\"none\" stroke=\"" + s.color +
                       "\" stroke-width=\"2\"";
    if (s.dashed) path += " stroke-dasharray=\"7,5\"";
    path += " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i > 0) path += ' ';
      path += num(px(s.points[i][0])) + "," + num(py(s.points[i][1]));
    }
    path += "\"/>\n";
    svg += path;
    for (const auto& p : s.points) {
      svg += "<circle cx=\"" + num(px(p[0])) + "\" cy=\"" + num(py(p[1])) + "\" r=\"3\" fill=\"" +
             s.color + "\"/>\n";
    }
  }

  double legend_y = kTop + 16.0;
  for (const auto& s : series) {
    const double lx = kRight - 180.0;
    svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(legend_y - 4) + "\" x2=\"" +
           num(lx + 30) + "\" y2=\"" + num(legend_y - 4) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"7,5\"" : "") + "/>\n";
    svg += "<text x=\"" + num(lx + 38) + "\" y=\"" + num(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.label) + "</text>\n";
    legend_y += 18.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace pocs
