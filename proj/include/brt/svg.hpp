#pragma once

// Minimal self-contained SVG figures: line chart, horizontal bar chart and
// heatmap. Fixed canvas, generic font family, no timestamps or random ids, so
// identical inputs give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "brt/numfmt.hpp"

namespace brt::svg {

inline constexpr int kWidth = 720;
inline constexpr int kHeight = 440;
inline constexpr double kLeft = 80.0;
inline constexpr double kRight = 30.0;
inline constexpr double kTop = 50.0;
inline constexpr double kBottom = 60.0;

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string num(double v) { return format_fixed(v, 2); }

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  static Range of(const std::vector<double>& values) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double v : values) {
      if (!std::isfinite(v)) continue;
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
    if (!(r.lo <= r.hi)) return {0.0, 1.0};
    if (r.hi - r.lo < 1e-12) {
      const double pad = std::max(1e-6, std::abs(r.lo) * 0.05);
      return {r.lo - pad, r.hi + pad};
    }
    return r;
  }

  Range padded(double frac) const {
    const double pad = (hi - lo) * frac;
    return {lo - pad, hi + pad};
  }
};

inline void open_document(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(title) << "</text>\n";
}

inline void axes(std::ostringstream& out, Range x, Range y, const std::string& x_label,
                 const std::string& y_label) {
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\""
      << num(y0) << "\"/>\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\""
      << num(y1) << "\"/>\n";
  out << "</g>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = x.lo + (x.hi - x.lo) * t / 4.0;
    const double px = x0 + (x1 - x0) * t / 4.0;
    out << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
        << tick_label(fx) << "</text>\n";
    const double fy = y.lo + (y.hi - y.lo) * t / 4.0;
    const double py = y0 + (y1 - y0) * t / 4.0;
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">"
        << tick_label(fy) << "</text>\n";
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18.0)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((y0 + y1) / 2) << ")\">" << escape(y_label) << "</text>\n";
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
};

inline std::string line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const Series& s : series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Range xr = Range::of(xs);
  const Range yr = Range::of(ys).padded(0.05);
  auto px = [&](double v) { return kLeft + (kWidth - kRight - kLeft) * (v - xr.lo) / (xr.hi - xr.lo); };
  auto py = [&](double v) {
    return (kHeight - kBottom) - (kHeight - kBottom - kTop) * (v - yr.lo) / (yr.hi - yr.lo);
  };

  std::ostringstream out;
  open_document(out, title);
  axes(out, xr, yr, x_label, y_label);
  double legend_y = kTop + 4;
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
    if (series.size() > 1) {
      const double lx = kWidth - kRight - 150;
      out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(legend_y) << "\" x2=\"" << num(lx + 20)
          << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(legend_y + 4) << "\">"
          << escape(s.name) << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string bar_chart(const std::string& title, const std::string& value_label,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& values) {
  std::ostringstream out;
  open_document(out, title);
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  if (!(hi > 0.0)) hi = 1.0;
  const double x0 = kLeft + 40;
  const double x1 = kWidth - kRight - 50;
  const double band = (kHeight - kTop - kBottom) / std::max<std::size_t>(1, labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + band * static_cast<double>(i);
    const double w = (x1 - x0) * std::max(0.0, values[i]) / hi;
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y + band * 0.6) << "\" text-anchor=\"end\">"
        << escape(labels[i]) << "</text>\n";
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y + band * 0.15) << "\" width=\"" << num(w)
        << "\" height=\"" << num(band * 0.7) << "\" fill=\"#4c72b0\"/>\n";
    out << "<text x=\"" << num(x0 + w + 4) << "\" y=\"" << num(y + band * 0.6) << "\">"
        << format_fixed(values[i], 2) << "</text>\n";
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18.0)
      << "\" text-anchor=\"middle\">" << escape(value_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

// Diverging blue-white-red color for t in [-1, 1].
inline std::string diverging_color(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r = 255;
  int g = 255;
  int b = 255;
  if (t < 0) {
    r = static_cast<int>(std::lround(255 * (1 + t)));
    g = static_cast<int>(std::lround(255 * (1 + 0.6 * t)));
  } else {
    g = static_cast<int>(std::lround(255 * (1 - 0.6 * t)));
    b = static_cast<int>(std::lround(255 * (1 - t)));
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

// values is row-major |x| x |y|; cell (a, b) is drawn at column a, row b.
inline std::string heatmap(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<double>& x,
                           const std::vector<double>& y, const std::vector<double>& values) {
  std::ostringstream out;
  open_document(out, title);
  double scale = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  }
  if (!(scale > 0.0)) scale = 1.0;
  const double x0 = kLeft;
  const double x1 = kWidth - kRight - 60;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  const double cw = (x1 - x0) / std::max<std::size_t>(1, x.size());
  const double ch = (y0 - y1) / std::max<std::size_t>(1, y.size());
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < y.size(); ++b) {
      const double v = values[a * y.size() + b];
      out << "<rect x=\"" << num(x0 + cw * a) << "\" y=\"" << num(y0 - ch * (b + 1)) << "\" width=\""
          << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"" << diverging_color(v / scale)
          << "\"/>\n";
    }
  }
  if (!x.empty() && !y.empty()) {
    Range xr{x.front(), x.back()};
    Range yr{y.front(), y.back()};
    out << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + 18) << "\">" << tick_label(xr.lo) << "</text>\n";
    out << "<text x=\"" << num(x1) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"end\">"
        << tick_label(xr.hi) << "</text>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y0) << "\" text-anchor=\"end\">"
        << tick_label(yr.lo) << "</text>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y1 + 10) << "\" text-anchor=\"end\">"
        << tick_label(yr.hi) << "</text>\n";
  }
  // Color key.
  const double kx = kWidth - kRight - 40;
  for (int i = 0; i < 20; ++i) {
    const double t = 1.0 - 2.0 * i / 19.0;
    out << "<rect x=\"" << num(kx) << "\" y=\"" << num(y1 + (y0 - y1) * i / 20.0) << "\" width=\"14\" height=\""
        << num((y0 - y1) / 20.0) << "\" fill=\"" << diverging_color(t) << "\"/>\n";
  }
  out << "<text x=\"" << num(kx + 7) << "\" y=\"" << num(y1 - 4) << "\" text-anchor=\"middle\">"
      << tick_label(scale) << "</text>\n";
  out << "<text x=\"" << num(kx + 7) << "\" y=\"" << num(y0 + 14) << "\" text-anchor=\"middle\">"
      << tick_label(-scale) << "</text>\n";
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18.0)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((y0 + y1) / 2) << ")\">" << escape(y_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace brt::svg
