#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hdnba::tools {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string render_svg(const SvgChart& c) {
  const double left = 60, right = 150, top = 30, bottom = 40;
  const double pw = c.width - left - right, ph = c.height - top - bottom;
  size_t n = 0;
  double ymax = 0;
  for (auto& l : c.lines) {
    n = std::max(n, l.y.size());
    for (double v : l.y) ymax = std::max(ymax, v);
  }
  if (ymax <= 0) ymax = 1;
  if (n < 2) n = 2;
  auto X = [&](double i) { return left + pw * i / double(n - 1); };
  auto Y = [&](double v) { return top + ph * (1.0 - v / ymax); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\""
    << c.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left << "\" y=\"18\" font-size=\"14\">" << esc(c.title) << "</text>\n";
  for (int m : c.markers)
    o << "<line x1=\"" << num(X(m)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(X(m))
      << "\" y2=\"" << num(top + ph - 8) << "\" stroke=\"black\"/>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double v = ymax * k / 4.0;
    o << "<text x=\"" << left - 6 << "\" y=\"" << num(Y(v) + 4)
      << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << c.height - 8
    << "\" text-anchor=\"middle\">" << esc(c.x_label) << " 0.." << n - 1 << "</text>\n";
  o << "<text x=\"14\" y=\"" << num(top + ph / 2) << "\" transform=\"rotate(-90 14 "
    << num(top + ph / 2) << ")\" text-anchor=\"middle\">" << esc(c.y_label) << "</text>\n";

  for (size_t k = 0; k < c.lines.size(); ++k) {
    const auto& l = c.lines[k];
    const char* col = kColors[k % 8];
    // thin out long traces to keep files small
    size_t step = std::max<size_t>(1, l.y.size() / 2000);
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
    for (size_t i = 0; i < l.y.size(); i += step) o << num(X(i)) << "," << num(Y(l.y[i])) << " ";
    o << "\"/>\n";
    double ly = top + 14 + 16 * k;
    o << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
      << num(left + pw + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << col
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(left + pw + 34) << "\" y=\"" << num(ly) << "\">" << esc(l.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

SvgChart chart_from_traces(const std::vector<ActivityTrace>& traces,
                           const std::vector<std::string>& labels,
                           const std::vector<Series>& series, bool normalize) {
  SvgChart c;
  c.y_label = normalize ? "activity (peak = 100)" : "spikes/ms";
  for (size_t i = 0; i < traces.size(); ++i) {
    for (Series s : series) {
      SvgLine l;
      l.label = labels.at(i) + " " + series_name(s);
      l.y = traces[i].series(s);
      if (normalize) l.y = normalize_peak(l.y);
      c.lines.push_back(std::move(l));
    }
  }
  if (!traces.empty()) c.markers = traces[0].onsets();
  return c;
}

}  // namespace hdnba::tools
