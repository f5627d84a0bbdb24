#include "hdnba/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace hdnba {

const char* series_name(Series s) {
  switch (s) {
    case Series::Gating: return "gating";
    case Series::WM: return "wm";
    case Series::Other: return "other";
    default: return "total";
  }
}

void ActivityTrace::push(double g, double w, double o, int marker) {
  gating.push_back(g);
  wm.push_back(w);
  other.push_back(o);
  total.push_back(g + w + o);
  word_marker.push_back(marker);
}

const std::vector<double>& ActivityTrace::series(Series s) const {
  switch (s) {
    case Series::Gating: return gating;
    case Series::WM: return wm;
    case Series::Other: return other;
    default: return total;
  }
}

double ActivityTrace::sum(Series s) const {
  const auto& v = series(s);
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::vector<int> ActivityTrace::onsets() const {
  std::vector<std::pair<int, int>> m;
  for (size_t t = 0; t < word_marker.size(); ++t)
    if (word_marker[t] > 0) m.push_back({word_marker[t], static_cast<int>(t)});
  std::sort(m.begin(), m.end());
  std::vector<int> out;
  for (auto& [w, t] : m) out.push_back(t);
  return out;
}

std::vector<double> normalize_peak(const std::vector<double>& v, double peak) {
  if (v.empty()) return {};
  double mx = *std::max_element(v.begin(), v.end());
  if (!(mx > 0)) throw MetricsError("cannot normalize a series without a positive peak");
  std::vector<double> out(v.size());
  double f = peak / mx;
  for (size_t k = 0; k < v.size(); ++k) out[k] = v[k] * f;
  return out;
}

std::vector<double> relative_sums(const std::vector<double>& sums, size_t baseline) {
  if (baseline >= sums.size()) throw MetricsError("baseline index out of range");
  if (!(sums[baseline] != 0)) throw MetricsError("baseline sum is zero");
  std::vector<double> out;
  for (double s : sums) out.push_back(s / sums[baseline]);
  return out;
}

std::vector<double> relative_sums(const std::vector<ActivityTrace>& traces, size_t baseline,
                                  Series s) {
  std::vector<double> sums;
  for (const auto& t : traces) sums.push_back(t.sum(s));
  return relative_sums(sums, baseline);
}

std::string format_trace(const ActivityTrace& t) {
  std::ostringstream os;
  os << "# size=" << t.size << " config=" << t.fingerprint << "\n";
  os << "t_ms,total,gating,wm,other,word_marker\n";
  os << std::setprecision(10);
  for (size_t k = 0; k < t.ticks(); ++k)
    os << k << "," << t.total[k] << "," << t.gating[k] << "," << t.wm[k] << "," << t.other[k]
       << "," << t.word_marker[k] << "\n";
  return os.str();
}

void export_trace(const ActivityTrace& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MetricsError("cannot write trace: " + path);
  out << format_trace(t);
}

ActivityTrace parse_trace(const std::string& text) {
  ActivityTrace t;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      for (std::string kv; hs >> kv;) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        auto k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "size") t.size = std::stoi(v);
        if (k == "config") t.fingerprint = v;
      }
      continue;
    }
    if (!header) {
      if (line != "t_ms,total,gating,wm,other,word_marker")
        throw MetricsError("unexpected trace header: " + line);
      header = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double tm, tot, g, w, o;
    int m;
    if (!(ls >> tm >> tot >> g >> w >> o >> m)) throw MetricsError("malformed trace row: " + line);
    t.gating.push_back(g);
    t.wm.push_back(w);
    t.other.push_back(o);
    t.total.push_back(tot);
    t.word_marker.push_back(m);
  }
  if (!header) throw MetricsError("trace without column header");
  return t;
}

ActivityTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MetricsError("cannot read trace: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::vector<double> word_window_means(const std::vector<double>& v, const std::vector<int>& onsets,
                                      int end) {
  std::vector<double> out;
  for (size_t k = 0; k < onsets.size(); ++k) {
    int a = onsets[k];
    int b = k + 1 < onsets.size() ? onsets[k + 1] : end;
    b = std::min<int>(b, static_cast<int>(v.size()));
    double s = 0;
    for (int t = a; t < b; ++t) s += v[t];
    out.push_back(b > a ? s / (b - a) : 0.0);
  }
  return out;
}

std::vector<int> local_maxima(const std::vector<double>& v) {
  std::vector<int> out;
  int n = static_cast<int>(v.size());
  for (int k = 0; k < n; ++k) {
    bool left = k == 0 || v[k] > v[k - 1];
    bool right = k == n - 1 || v[k] > v[k + 1];
    if (n > 1 && left && right) out.push_back(k);
  }
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw MetricsError("pearson needs equal non-empty series");
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0 || sbb == 0) return saa == sbb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> resample(const std::vector<double>& v, size_t points) {
  if (v.empty() || points == 0) return {};
  std::vector<double> out(points);
  for (size_t k = 0; k < points; ++k) {
    double x = points == 1 ? 0 : static_cast<double>(k) * (v.size() - 1) / (points - 1);
    size_t lo = static_cast<size_t>(x);
    size_t hi = std::min(lo + 1, v.size() - 1);
    double f = x - lo;
    out[k] = v[lo] * (1 - f) + v[hi] * f;
  }
  return out;
}

std::string PeakReport::text() const {
  std::ostringstream os;
  if (flat) {
    os << "flat\n";
    return os.str();
  }
  auto list = [&](const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : " ") + std::to_string(x + 1);
    return s.empty() ? std::string("-") : s;
  };
  os << "series peaks at words: " << list(series_peaks) << "\n";
  os << "reference peaks at words: " << list(reference_peaks) << "\n";
  os << "coinciding: " << matched.size() << "/" << reference_peaks.size() << "\n";
  return os.str();
}

PeakReport compare_profile(const std::vector<double>& per_word,
                           const std::vector<double>& reference, int tolerance,
                           double flat_tolerance) {
  PeakReport r;
  r.reference_peaks = local_maxima(reference);
  if (per_word.empty()) {
    r.flat = true;
    return r;
  }
  auto [lo, hi] = std::minmax_element(per_word.begin(), per_word.end());
  double scale = std::max(std::abs(*hi), 1e-12);
  if ((*hi - *lo) / scale < flat_tolerance) {
    r.flat = true;
    return r;
  }
  r.series_peaks = local_maxima(per_word);
  for (int p : r.reference_peaks)
    for (int q : r.series_peaks)
      if (std::abs(p - q) <= tolerance) {
        r.matched.push_back(p);
        break;
      }
  return r;
}

}  // namespace hdnba
