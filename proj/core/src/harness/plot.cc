// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/plot.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sdnet/errors.h"
#include "sdnet/fs.h"

namespace sdnet::harness {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string Escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

class Canvas {
 public:
  Canvas(const PlotLabels &labels, Range x, Range y) : x_(x), y_(y) {
    os_ << std::fixed << std::setprecision(2);
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << Escape(labels.title) << "</text>\n"
        << "<text x=\"" << kLeft + PlotW() / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">" << Escape(labels.x_label) << "</text>\n"
        << "<text transform=\"translate(18," << kTop + PlotH() / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(labels.y_label) << "</text>\n"
        << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << PlotW()
        << "\" height=\"" << PlotH() << "\" fill=\"none\" stroke=\"#444\"/>\n";
  }

  double PlotW() const { return kWidth - kLeft - kRight; }
  double PlotH() const { return kHeight - kTop - kBottom; }
  double X(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * PlotW(); }
  double Y(double v) const { return kTop + (1.0 - (v - y_.lo) / (y_.hi - y_.lo)) * PlotH(); }

  void Ticks(bool numeric_x) {
    for (int i = 0; i <= 4; ++i) {
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      os_ << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + PlotW() << "\" y1=\"" << Y(yv)
          << "\" y2=\"" << Y(yv) << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << kLeft - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">"
          << Short(yv) << "</text>\n";
      if (numeric_x) {
        const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
        os_ << "<text x=\"" << X(xv) << "\" y=\"" << kTop + PlotH() + 16
            << "\" text-anchor=\"middle\">" << Short(xv) << "</text>\n";
      }
    }
  }

  std::ostringstream &out() { return os_; }

  std::string Finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

  static std::string Short(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
  }

 private:
  Range x_, y_;
  std::ostringstream os_;
};

}  // namespace

std::string LinePlotSvg(const PlotLabels &labels, const std::vector<Series> &series) {
  Range xr, yr;
  for (const auto &s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("LinePlotSvg: x and y lengths differ");
    for (double v : s.x) xr.Add(v);
    for (double v : s.y) yr.Add(v);
  }
  xr.Finish();
  yr.Finish();
  Canvas canvas(labels, xr, yr);
  canvas.Ticks(true);
  auto &os = canvas.out();
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto &s = series[k];
    const char *color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << canvas.X(s.x[i]) << "," << canvas.Y(s.y[i]) << " ";
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" x2=\"" << kWidth - kRight + 30
       << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kWidth - kRight + 36 << "\" y=\"" << ly + 4 << "\">"
       << Escape(s.name) << "</text>\n";
  }
  return canvas.Finish();
}

std::string BarChartSvg(const PlotLabels &labels, const std::vector<std::string> &categories,
                        const std::vector<double> &values) {
  if (categories.size() != values.size()) {
    throw DomainError("BarChartSvg: one value per category is required");
  }
  Range xr{0.0, static_cast<double>(std::max<std::size_t>(values.size(), 1))};
  Range yr;
  yr.Add(0.0);
  for (double v : values) yr.Add(v);
  yr.Finish();
  Canvas canvas(labels, xr, yr);
  canvas.Ticks(false);
  auto &os = canvas.out();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x0 = canvas.X(i + 0.15), x1 = canvas.X(i + 0.85);
    const double y0 = canvas.Y(std::max(values[i], 0.0)), y1 = canvas.Y(std::min(values[i], 0.0));
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 << "\" height=\""
       << y1 - y0 << "\" fill=\"" << kPalette[0] << "\"/>\n"
       << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kTop + canvas.PlotH() + 16
       << "\" text-anchor=\"middle\">" << Escape(categories[i]) << "</text>\n"
       << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << y0 - 4 << "\" text-anchor=\"middle\">"
       << Canvas::Short(values[i]) << "</text>\n";
  }
  return canvas.Finish();
}

std::string HistogramSvg(const PlotLabels &labels, const std::vector<double> &values, int bins) {
  if (bins < 1) throw DomainError("HistogramSvg: bins must be positive");
  Range vr;
  for (double v : values) vr.Add(v);
  vr.Finish();
  std::vector<double> counts(bins, 0.0);
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    int b = static_cast<int>((v - vr.lo) / (vr.hi - vr.lo) * bins);
    counts[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  Range yr;
  yr.Add(0.0);
  for (double c : counts) yr.Add(c);
  yr.Finish();
  Canvas canvas(labels, vr, yr);
  canvas.Ticks(true);
  auto &os = canvas.out();
  const double w = (vr.hi - vr.lo) / bins;
  for (int b = 0; b < bins; ++b) {
    const double x0 = canvas.X(vr.lo + b * w), x1 = canvas.X(vr.lo + (b + 1) * w);
    os << "<rect x=\"" << x0 << "\" y=\"" << canvas.Y(counts[b]) << "\" width=\""
       << std::max(x1 - x0 - 1.0, 0.5) << "\" height=\"" << canvas.Y(0) - canvas.Y(counts[b])
       << "\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  return canvas.Finish();
}

void WriteText(const std::filesystem::path &path, const std::string &text) {
  EnsureParentDir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sdnet::harness
