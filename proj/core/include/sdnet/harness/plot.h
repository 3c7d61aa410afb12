// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_PLOT_H_
#define SDNET_HARNESS_PLOT_H_

#include <filesystem>
#include <string>
#include <vector>

namespace sdnet::harness {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Standalone SVG documents.
std::string LinePlotSvg(const PlotLabels &labels, const std::vector<Series> &series);
std::string BarChartSvg(const PlotLabels &labels, const std::vector<std::string> &categories,
                        const std::vector<double> &values);
std::string HistogramSvg(const PlotLabels &labels, const std::vector<double> &values,
                         int bins = 20);

void WriteText(const std::filesystem::path &path, const std::string &text);

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_PLOT_H_
