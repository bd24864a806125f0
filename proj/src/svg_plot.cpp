#include "aebsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aebsim/format.hpp"

namespace aebsim::svg {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;  // legend column
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 52;

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num(double v) {
  // Pixel coordinates; two decimals keep files small and stable.
  const double r = std::round(v * 100.0) / 100.0;
  std::string s = format_double(r);
  return s;
}

/// 1-2-5 tick spacing covering [lo, hi] with about `target` intervals.
std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step) * step;
  for (double v = first; v <= hi + step * 1e-9; v += step) ticks.push_back(v);
  return ticks;
}

std::string tick_label(double v) {
  // Trim float noise on tick values (they come from nice steps).
  const double r = std::round(v * 1e6) / 1e6;
  return format_double(r + 0.0);  // +0.0 folds -0 into 0
}

struct Bounds {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
};

Bounds data_bounds(std::span<const Series> series) {
  Bounds b;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      b.x_min = std::min(b.x_min, s.x[i]);
      b.x_max = std::max(b.x_max, s.x[i]);
      b.y_min = std::min(b.y_min, s.y[i]);
      b.y_max = std::max(b.y_max, s.y[i]);
    }
  }
  if (!std::isfinite(b.x_min)) b = Bounds{0.0, 1.0, 0.0, 1.0};
  if (b.x_max <= b.x_min) b.x_max = b.x_min + 1.0;
  if (b.y_max <= b.y_min) b.y_max = b.y_min + 1.0;
  return b;
}

}  // namespace

void write_line_chart(std::ostream& out, const ChartSpec& spec, std::span<const Series> series) {
  Bounds b = data_bounds(series);
  if (spec.y_range) {
    b.y_min = spec.y_range->first;
    b.y_max = spec.y_range->second;
  } else {
    const double pad = 0.05 * (b.y_max - b.y_min);
    b.y_min -= pad;
    b.y_max += pad;
  }

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;
  const auto to_px_x = [&](double v) {
    return kMarginLeft + (v - b.x_min) / (b.x_max - b.x_min) * plot_w;
  };
  const auto to_px_y = [&](double v) {
    return kMarginTop + (1.0 - (v - b.y_min) / (b.y_max - b.y_min)) * plot_h;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (kMarginLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";

  // Grid + axis ticks.
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t : nice_ticks(b.x_min, b.x_max, 8)) {
    const double px = to_px_x(t);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(kMarginTop + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(kMarginTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << escape(tick_label(t)) << "</text>\n";
  }
  if (spec.y_ticks.empty()) {
    for (double t : nice_ticks(b.y_min, b.y_max, 6)) {
      const double py = to_px_y(t);
      out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py) << "\" x2=\""
          << num(kMarginLeft + plot_w) << "\" y2=\"" << num(py) << "\" stroke=\"#e0e0e0\"/>\n";
      out << "<text x=\"" << (kMarginLeft - 8) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\">" << escape(tick_label(t)) << "</text>\n";
    }
  } else {
    for (const AxisTick& tick : spec.y_ticks) {
      const double py = to_px_y(tick.value);
      out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py) << "\" x2=\""
          << num(kMarginLeft + plot_w) << "\" y2=\"" << num(py) << "\" stroke=\"#e0e0e0\"/>\n";
      out << "<text x=\"" << (kMarginLeft - 8) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\">" << escape(tick.label) << "</text>\n";
    }
  }
  out << "</g>\n";

  // Axes.
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << (kMarginLeft + plot_w / 2) << "\" y=\"" << (spec.height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << (kMarginTop + plot_h / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

  // Series.
  for (const Series& s : series) {
    out << "<path fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" d=\"";
    bool pen_down = false;
    double prev_x = 0.0, prev_y = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        have_prev = false;
        continue;
      }
      const double cy = std::clamp(s.y[i], b.y_min, b.y_max);
      const double px = to_px_x(s.x[i]);
      const double py = to_px_y(cy);
      if (!pen_down) {
        out << "M" << num(px) << " " << num(py);
        pen_down = true;
      } else {
        if (s.step && have_prev) out << " L" << num(px) << " " << num(prev_y);
        out << " L" << num(px) << " " << num(py);
      }
      prev_x = px;
      prev_y = py;
      have_prev = true;
    }
    (void)prev_x;
    out << "\"/>\n";
  }

  // Legend.
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  int row = 0;
  for (const Series& s : series) {
    if (s.label.empty()) continue;
    const double lx = kMarginLeft + plot_w + 14;
    const double ly = kMarginTop + 10 + 18 * row;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
        << "</text>\n";
    ++row;
  }
  out << "</g>\n";
  out << "</svg>\n";
}

}  // namespace aebsim::svg
