#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hdnba {

enum class Series { Total, Gating, WM, Other };
const char* series_name(Series s);

struct ActivityTrace {
  int size = 0;
  std::string fingerprint;
  std::vector<double> gating, wm, other, total;
  std::vector<int> word_marker;  // word position (1-based) at its onset tick, else 0

  size_t ticks() const { return total.size(); }
  void push(double g, double w, double o, int marker);
  const std::vector<double>& series(Series s) const;
  double sum(Series s) const;
  // Onset ticks in word order.
  std::vector<int> onsets() const;
};

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> normalize_peak(const std::vector<double>& v, double peak = 100.0);

std::vector<double> relative_sums(const std::vector<double>& sums, size_t baseline);
std::vector<double> relative_sums(const std::vector<ActivityTrace>& traces, size_t baseline,
                                  Series s = Series::Total);

void export_trace(const ActivityTrace& t, const std::string& path);
std::string format_trace(const ActivityTrace& t);
ActivityTrace read_trace(const std::string& path);
ActivityTrace parse_trace(const std::string& text);

// Mean of a series over each word window [onset_k, onset_k+1).
std::vector<double> word_window_means(const std::vector<double>& v, const std::vector<int>& onsets,
                                      int end);

// Indices k where v[k] is strictly above both neighbours (edges compare to
// their single neighbour).
std::vector<int> local_maxima(const std::vector<double>& v);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Resample to `points` samples by linear interpolation.
std::vector<double> resample(const std::vector<double>& v, size_t points);

struct PeakReport {
  bool flat = false;
  std::vector<int> series_peaks;     // word positions (0-based)
  std::vector<int> reference_peaks;  // word positions (0-based)
  std::vector<int> matched;          // reference peaks with a series peak within tolerance
  bool all_matched() const { return !flat && matched.size() == reference_peaks.size(); }
  std::string text() const;
};

// Word-level peak coincidence; `flat_tolerance` is the relative range below
// which a series counts as flat.
PeakReport compare_profile(const std::vector<double>& per_word,
                           const std::vector<double>& reference, int tolerance = 1,
                           double flat_tolerance = 0.02);

}  // namespace hdnba
