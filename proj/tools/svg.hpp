#pragma once

#include <string>
#include <vector>

#include "hdnba/metrics.hpp"

namespace hdnba::tools {

struct SvgLine {
  std::string label;
  std::vector<double> y;
};

struct SvgChart {
  std::string title;
  std::string x_label = "t (ms)";
  std::string y_label = "spikes/ms";
  std::vector<SvgLine> lines;
  std::vector<int> markers;  // x positions of word onsets
  int width = 900, height = 420;
};

std::string render_svg(const SvgChart& c);

// One line per requested series of every trace.
SvgChart chart_from_traces(const std::vector<ActivityTrace>& traces,
                           const std::vector<std::string>& labels,
                           const std::vector<Series>& series, bool normalize);

}  // namespace hdnba::tools
