#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cli {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 55;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// round step of roughly (hi - lo) / 5
double tick_step(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, double x_lo,
                       double x_hi, double y_lo, double y_hi) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) {
    y = std::clamp(y, y_lo, y_hi);
    return kTop + (y_hi - y) / (y_hi - y_lo) * ph;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"22\" font-size=\"15\" "
    << "text-anchor=\"middle\">" << escape(title) << "</text>\n";

  // frame and ticks
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
    << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = tick_step(x_lo, x_hi);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
    o << "<line x1=\"" << fmt(sx(t)) << "\" y1=\"" << fmt(kTop + ph)
      << "\" x2=\"" << fmt(sx(t)) << "\" y2=\"" << fmt(kTop + ph + 5)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << fmt(kTop + ph + 19)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  const double ys = tick_step(y_lo, y_hi);
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
    o << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(t))
      << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(sy(t))
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(t) + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << fmt(kTop + ph / 2)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << fmt(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.6\"";
    if (s.dashed) o << " stroke-dasharray=\"6 4\"";
    o << " points=\"";
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x)) continue;
      const double yy = std::isfinite(y) ? y : (y > 0 ? y_hi : y_lo);
      o << fmt(sx(x)) << ',' << fmt(sy(yy)) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 12 + 20.0 * static_cast<double>(i);
    const double lx = kLeft + pw + 15;
    o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\""
      << fmt(lx + 25) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
      << "/>\n";
    o << "<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly + 4) << "\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cli
