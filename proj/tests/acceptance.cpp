// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hdnba/control.hpp"

using namespace hdnba;

namespace {

// pinned tolerances and thresholds
constexpr int kSizes[] = {15, 20, 25, 30};
constexpr double kWmBand = 0.05;
constexpr double kProfileCorr = 0.95;
constexpr double kConstituentDrop = 0.10;
constexpr double kSaladRatio = 0.80;
constexpr int kPeakTolerance = 1;
constexpr double kElevated = 1.0;  // spikes/ms
constexpr double kBaselineFactor = 2.0;
constexpr double kMaxMinutes = 10.0;

const Census kTableS12[] = {
    {8880, 3030, 2055, 13965, 144, 14109, 28218},
    {12640, 4240, 2740, 19620, 149, 19769, 39538},
    {16800, 5550, 3425, 25775, 154, 25929, 51858},
    {21360, 6960, 4110, 32430, 159, 32589, 65178},
};

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};
std::vector<Line> lines;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  lines.push_back({id, name, pass, detail});
  std::printf("%s  %2d  %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

struct Sim {
  ControlSchedule sched;
  std::map<int, RunResult> by_size;
};

class Runner {
 public:
  Runner() : cfg_(load_default_config()), table_(LicensingTable::load_default()),
             tm_(Timing::from_config(cfg_)) {}

  const Config& cfg() const { return cfg_; }
  const LicensingTable& table() const { return table_; }
  const Timing& timing() const { return tm_; }

  ScenarioSpec load(const std::string& rel) { return load_scenario(data_dir() + "/" + rel); }

  const RunResult& run(const std::string& rel, int n) {
    auto& s = sims_[rel];
    if (s.sched.events.empty()) {
      auto sc = load(rel);
      Timing tm = tm_;
      if (sc.word_ms) tm.word_ms = *sc.word_ms;
      s.sched = compile_schedule(sc, table_, tm);
    }
    auto it = s.by_size.find(n);
    if (it == s.by_size.end()) {
      Architecture arch(n, cfg_);
      it = s.by_size.emplace(n, run_schedule(arch, s.sched)).first;
    }
    return it->second;
  }
  const ControlSchedule& schedule(const std::string& rel) { return sims_.at(rel).sched; }

  double sum(const std::string& rel, int n, Series s = Series::Total) {
    return run(rel, n).trace.sum(s);
  }

  // Mean over the four sizes of per-size peak-normalized series.
  std::vector<double> averaged(const std::string& rel, Series s) {
    std::vector<double> avg;
    for (int n : kSizes) {
      auto v = normalize_peak(run(rel, n).trace.series(s));
      if (avg.empty()) avg.assign(v.size(), 0.0);
      for (size_t t = 0; t < v.size(); ++t) avg[t] += v[t] / 4.0;
    }
    return avg;
  }

 private:
  Config cfg_;
  LicensingTable table_;
  Timing tm_;
  std::map<std::string, Sim> sims_;
};

Runner* R = nullptr;

const std::vector<std::string> kCorpus = {
    "all_sgs",          "bob_likes_pasta",          "great_white_whale",
    "great_white_whale_scope", "liz_bought_watch",  "long_poems_and_essays",
    "long_poems_and_essays_adj", "max_eats_pizza",  "miles_fallen",
    "others_i_know_are_genuine", "pale_white_whale", "reporter_ac",
    "reporter_or",      "reporter_sr",              "sue_eats_fish",
    "sue_likes_pizza",  "sue_signed_letter",        "ten_sad_students",
    "ten_sad_students_of_bill_gates", "ten_students", "what_liz_bought",
    "what_max_said_liz_bought", "who_signed_letter",
};

std::string corpus(const std::string& name) { return "corpus/" + name + ".txt"; }

// ---- 1, 2

void census_exactness() {
  bool ok = true;
  std::string detail;
  double worst = 0;
  for (int k = 0; k < 4; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Architecture arch(kSizes[k], R->cfg());
    auto c = arch.census();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst = std::max(worst, secs);
    if (!(c == kTableS12[k])) {
      ok = false;
      detail += "W" + std::to_string(kSizes[k]) + " differs; ";
    }
    if (secs >= 1.0) ok = false;
  }
  report(1, "census exactness", ok, detail + "slowest build " + fmt("%.3f s", worst));
}

// Exact quadratic through three points, evaluated at x.
long lagrange(const long xs[3], const long ys[3], long x) {
  // multiply out to keep integer arithmetic exact
  long num = 0, den = 1;
  long d[3];
  for (int i = 0; i < 3; ++i) {
    d[i] = 1;
    for (int j = 0; j < 3; ++j)
      if (j != i) d[i] *= xs[i] - xs[j];
  }
  den = std::abs(d[0] * d[1] * d[2]);
  for (int i = 0; i < 3; ++i) {
    long term = ys[i] * (den / d[i]);
    for (int j = 0; j < 3; ++j)
      if (j != i) term *= x - xs[j];
    num += term;
  }
  return num % den == 0 ? num / den : -1;
}

void closed_form_census() {
  bool ok = true;
  std::vector<Census> got;
  for (int n : kSizes) got.push_back(Architecture(n, R->cfg()).census());
  auto field = [](const Census& c, int f) {
    return f == 0 ? c.gating : f == 1 ? c.working_memory : c.other;
  };
  for (int f = 0; f < 3; ++f) {
    for (int out = 0; out < 4; ++out) {
      long xs[3], ys[3];
      int m = 0;
      for (int k = 0; k < 4; ++k)
        if (k != out) {
          xs[m] = kSizes[k];
          ys[m++] = field(got[k], f);
        }
      if (lagrange(xs, ys, kSizes[out]) != field(got[out], f)) ok = false;
    }
    for (int k = 0; k < 4; ++k)
      if (field(got[k], f) != field(census_formula(kSizes[k]), f)) ok = false;
  }
  report(2, "closed-form census", ok, "8n^2+472n, 2n^2+172n, 137n; each size predicted from the other three");
}

// ---- 3

void circuit_behaviors() {
  const Config& cfg = R->cfg();
  auto pp = PopulationParams::from_config(cfg);
  auto gw = GateWeights::from_config(cfg, "gate");
  auto ww = WmWeights::from_config(cfg, "wm");
  double open = Thresholds::from_config(cfg).open;

  // (a) sustained activity
  double after = 0;
  {
    Network net(pp);
    auto x = net.create_population();
    auto wm = build_working_memory(net, ww, x);
    net.set_input(x, 100);
    for (int t = 0; t < 400; ++t) net.step();
    net.set_input(x, 0);
    double lo = 1e9;
    for (int t = 0; t < 2000; ++t) {
      net.step();
      lo = std::min(lo, net.e(wm.a));
    }
    after = lo;
  }
  bool a = after > Thresholds::from_config(cfg).sustain;

  // (b) closed selection gate
  double leak = 0, base = 0, opened = 0;
  {
    Network net(pp);
    auto x = net.create_population();
    auto y = net.create_population();
    auto sig = net.create_population();
    auto g = build_selection_gate(net, gw, x, y, sig);
    base = net.baseline(y);
    net.set_input(x, 100);
    for (int t = 0; t < 1000; ++t) {
      net.step();
      leak = std::max(leak, net.e(y));
    }
    net.set_input(sig, 100);
    for (int t = 0; t < 100; ++t) {
      net.step();
      opened = std::max(opened, net.output(g.gate));
    }
  }
  bool b = leak <= kBaselineFactor * base && opened > open;

  // (c) binding gate
  double before = 0, redrive = 0;
  {
    Network net(pp);
    auto x = net.create_population();
    auto y = net.create_population();
    auto sig = net.create_population();
    build_binding_gate(net, gw, ww, x, y, sig);
    net.set_input(x, 100);
    for (int t = 0; t < 200; ++t) {
      net.step();
      before = std::max(before, net.e(y));
    }
    net.set_input(sig, 100);
    for (int t = 0; t < 50; ++t) net.step();
    net.set_input(sig, 0);
    net.set_input(x, 0);
    for (int t = 0; t < 500; ++t) net.step();
    net.set_input(x, 100);
    for (int t = 0; t < 200; ++t) {
      net.step();
      redrive = std::max(redrive, net.e(y));
    }
  }
  bool c = before < open && redrive > open;
  report(3, "circuit behaviors", a && b && c,
         "wm min " + fmt("%.1f", after) + " over 2000 ms; gate leak " + fmt("%.3f", leak) +
             " (base " + fmt("%.3f", base) + "), open " + fmt("%.1f", opened) +
             "; binding before " + fmt("%.2f", before) + ", re-drive " + fmt("%.1f", redrive));
}

// ---- 4

struct Constituent {
  std::string file;
  int first, last;  // 0-based word positions (virtual nodes excluded)
  std::string label;
};

void constituent_profile() {
  const std::vector<Constituent> cons = {
      {"ten_students", 0, 1, "Ten students"},
      {"ten_sad_students", 0, 2, "Ten sad students"},
      {"ten_sad_students_of_bill_gates", 0, 2, "inner Ten sad students"},
      {"ten_sad_students_of_bill_gates", 0, 5, "Ten sad students of Bill Gates"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cons) {
    auto avg = R->averaged(corpus(c.file), Series::Total);
    const auto& s = R->schedule(corpus(c.file));
    std::vector<int> on;  // onsets of real words
    for (size_t k = 0; k < s.nodes.size(); ++k)
      if (!s.nodes[k].is_virtual()) on.push_back(s.onsets[k]);
    int end = int(avg.size());
    int from = on[c.first];
    int to = c.last + 1 < int(on.size()) ? on[c.last + 1] : std::min(end, on[c.last] + 300);
    // window after completion: next word, or the tail
    int after_to = c.last + 2 < int(on.size()) ? on[c.last + 2] : end;
    auto means = word_window_means(avg, on, end);
    bool rises = means[c.last] > means[c.first];
    double peak = *std::max_element(avg.begin() + from, avg.begin() + to);
    int at = int(std::max_element(avg.begin() + from, avg.begin() + to) - avg.begin());
    double low = *std::min_element(avg.begin() + at, avg.begin() + after_to);
    double drop = 1.0 - low / peak;
    bool falls = drop >= kConstituentDrop;
    if (!(rises && falls)) ok = false;
    detail += c.label + ": drop " + fmt("%.0f%%", 100 * drop) + (rises ? "" : " (no rise)") + "; ";
  }
  report(4, "constituent profile", ok, detail);
}

// ---- 5, 6

void category_dominance() {
  bool ok = true;
  std::string bad;
  for (const auto& name : kCorpus)
    for (int n : kSizes) {
      const auto& t = R->run(corpus(name), n).trace;
      double g = t.sum(Series::Gating), w = t.sum(Series::WM), o = t.sum(Series::Other);
      if (!(g > o && o > 0 && g > w)) {
        ok = false;
        bad += " " + name + "/W" + std::to_string(n);
      }
    }
  report(5, "category dominance", ok,
         std::to_string(kCorpus.size()) + " sentences x 4 sizes" + (bad.empty() ? "" : "; fails:" + bad));
}

void size_scaling() {
  bool ok = true;
  double worst_band = 0, worst_corr = 1;
  std::string bad;
  for (const auto& name : kCorpus) {
    double prev = 0, wlo = 1e300, whi = 0;
    std::vector<std::vector<double>> prof;
    for (int n : kSizes) {
      const auto& t = R->run(corpus(name), n).trace;
      double tot = t.sum(Series::Total);
      if (tot <= prev) {
        ok = false;
        bad += " " + name + "(total)";
      }
      prev = tot;
      wlo = std::min(wlo, t.sum(Series::WM));
      whi = std::max(whi, t.sum(Series::WM));
      prof.push_back(normalize_peak(t.total));
    }
    double band = whi / wlo - 1.0;
    worst_band = std::max(worst_band, band);
    if (band > kWmBand) {
      ok = false;
      bad += " " + name + "(wm)";
    }
    for (size_t i = 0; i < prof.size(); ++i)
      for (size_t j = i + 1; j < prof.size(); ++j) {
        double r = pearson(prof[i], prof[j]);
        worst_corr = std::min(worst_corr, r);
        if (r < kProfileCorr) {
          ok = false;
          bad += " " + name + "(corr)";
        }
      }
  }
  report(6, "size scaling", ok,
         "wm spread " + fmt("%.2f%%", 100 * worst_band) + ", min profile r " +
             fmt("%.4f", worst_corr) + (bad.empty() ? "" : "; fails:" + bad));
}

// ---- 7

void peak_coincidence() {
  const std::string f = corpus("miles_fallen");
  R->run(f, 15);
  const auto& s = R->schedule(f);
  // positions are node windows, virtual nodes included
  std::vector<int> on = s.onsets;
  std::vector<std::string> words;
  for (const auto& nd : s.nodes) words.push_back(nd.token);
  auto pos = [&](const std::string& w) {
    return int(std::find(words.begin(), words.end(), w) - words.begin());
  };
  // only the peak locations of the reference are used
  std::vector<double> ref(words.size(), 0.0);
  ref[pos("how")] = 1.0;
  ref[pos("by")] = 1.0;

  auto total = R->averaged(f, Series::Total);
  auto wm = R->averaged(f, Series::WM);
  int end = int(total.size());
  auto rt = compare_profile(word_window_means(total, on, end), ref, kPeakTolerance);
  auto rw = compare_profile(word_window_means(wm, on, end), ref, kPeakTolerance);
  bool ok = rt.all_matched() && (rw.flat || rw.matched.empty());
  report(7, "peak coincidence", ok,
         "total matched " + std::to_string(rt.matched.size()) + "/2, wm " +
             (rw.flat ? std::string("flat") : std::to_string(rw.matched.size()) + " matched"));
}

// ---- 8, 9

void ordering(int id, const std::string& name, const std::vector<std::string>& files,
              const std::vector<std::string>& labels, const std::string& extra = "",
              const std::string& extra_label = "") {
  bool ok = true;
  double gap_prev = -1e300;
  std::string detail;
  for (int n : kSizes) {
    std::vector<double> v;
    for (const auto& f : files) v.push_back(R->sum(f, n));
    for (size_t k = 1; k < v.size(); ++k)
      if (!(v[k - 1] < v[k])) ok = false;
    double gap = v.back() - v.front();
    if (gap < gap_prev) ok = false;
    gap_prev = gap;
    detail += "W" + std::to_string(n);
    for (size_t k = 0; k < v.size(); ++k) detail += " " + labels[k] + fmt(" %.4f", v[k] / v[0]);
    if (!extra.empty()) detail += " " + extra_label + fmt(" %.4f", R->sum(extra, n) / v[0]);
    detail += "; ";
  }
  report(id, name, ok, detail);
}

// ---- 10

void word_salad() {
  bool ok = true;
  double worst = 0;
  for (int n : kSizes) {
    double r = R->sum(corpus("word_salad"), n) / R->sum(corpus("ten_sad_students_of_bill_gates"), n);
    worst = std::max(worst, r);
    if (r > kSaladRatio) ok = false;
  }
  report(10, "word salad", ok, "salad/structured at most " + fmt("%.3f", worst));
}

// ---- 11

void question_answering() {
  auto store = [](std::initializer_list<const char*> names) {
    std::vector<StructureSpec> v;
    for (const auto* f : names) v.push_back(load_structure(data_dir() + "/" + corpus(f)));
    return v;
  };
  const auto a = store({"sue_likes_pizza", "sue_eats_fish", "bob_likes_pasta"});
  // pizza also stored as the object of another verb
  const auto b = store({"sue_likes_pizza", "bob_likes_pasta", "max_eats_pizza"});
  auto ask = [&](const std::vector<StructureSpec>& specs, const std::string& q, bool comp,
                 bool& unchanged) {
    Architecture arch(15, R->cfg());
    auto st = store_sentences(arch, specs, R->table(), R->timing());
    auto before = bound_cells(arch);
    auto res = answer_question(arch, st, parse_question(q), comp, R->timing());
    unchanged = before == bound_cells(arch) && !before.empty();
    return res.answers;
  };
  bool u1, u2, u3, u4;
  auto a1 = ask(a, "Sue likes ?", true, u1);
  auto a2 = ask(a, "Sue likes ?", false, u2);
  auto a3 = ask(a, "? likes pizza", true, u3);
  auto a4 = ask(b, "? likes pizza", true, u4);
  bool same = u1 && u2 && u3 && u4;
  bool ok = a1 == std::set<std::string>{"pizza"} && a2.size() == 3 &&
            a3 == std::set<std::string>{"Sue"} && a4 == a3 && same;
  auto join = [](const std::set<std::string>& s) {
    std::string o;
    for (const auto& x : s) o += (o.empty() ? "" : ",") + x;
    return "{" + o + "}";
  };
  report(11, "question answering", ok,
         "Sue likes ? " + join(a1) + ", without competition " + join(a2) + ", ? likes pizza " +
             join(a3) + " / " + join(a4) + (same ? ", state unchanged" : ", state CHANGED"));
}

// ---- 12

void cell_signatures() {
  auto sc = R->load(corpus("miles_fallen"));
  auto s = compile_schedule(sc, R->table(), R->timing());
  Architecture arch(20, R->cfg());
  int h = s.row_of(11), d = s.row_of(13), idle = 19;
  RunOptions opt;
  opt.record_trace = false;
  opt.probes = {{h, d}, {h, idle}, {idle, d}, {idle, idle}};
  auto r = run_schedule(arch, s, opt);
  const auto& m = r.probe_means;
  const auto& lbg = arch.cell(idle, idle).lbg;
  const Network& net = arch.net();
  auto el = [](double v) { return v >= kElevated; };
  const auto& b = m[0];
  bool bound = b.dis > b.wm && b.wm > b.gate && b.gate > b.start && b.start > b.inhib;
  const auto& ha = m[1];
  bool hact = el(ha.start) && el(ha.inhib) && !el(ha.wm) && !el(ha.dis) && !el(ha.gate);
  const auto& da = m[2];
  bool dact = el(da.dis) && !el(da.start) && !el(da.inhib) && !el(da.wm) && !el(da.gate);
  const auto& in = m[3];
  auto base_ok = [&](double v, PopId p) { return v <= kBaselineFactor * net.baseline(p); };
  bool inact = base_ok(in.wm, lbg.wms[0].a) && base_ok(in.start, lbg.top.start) &&
               base_ok(in.dis, lbg.top.dis) && base_ok(in.inhib, lbg.top.inhib) &&
               base_ok(in.gate, lbg.top.gate);
  auto sig = [](const CellSignature& c) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "wm %.2f st %.2f dis %.2f inh %.2f g %.2f", c.wm, c.start, c.dis,
                  c.inhib, c.gate);
    return std::string(buf);
  };
  report(12, "cell signatures", bound && hact && dact && inact,
         std::string("bound[") + sig(b) + "] H[" + sig(ha) + "] D[" + sig(da) + "] idle[" + sig(in) +
             "]" + (bound ? "" : " bound-order") + (hact ? "" : " H-pattern") +
             (dact ? "" : " D-pattern") + (inact ? "" : " idle-level"));
}

// ---- 13, 14

void scenarios() {
  bool ok = true;
  std::string bad;
  for (const auto* name : {"upa1a", "upa1b", "upa4a", "upa4b", "upa13a", "upa13b", "gp6", "gp14"}) {
    auto o = scenario_run(name, R->cfg());
    bool policy_ok = (std::string(name).rfind("gp", 0) == 0) == (o.schedule.policy == Policy::Eager);
    if (!o.report.pass() || !policy_ok) {
      ok = false;
      bad += std::string(" ") + name;
    }
  }
  report(13, "ambiguity scenarios", ok, bad.empty() ? "8/8 as specified" : "fails:" + bad);
}

void embedding_timing() {
  auto ae6 = scenario_run("ae6", R->cfg(), 15, 300);
  auto pb1 = scenario_run("pb1", R->cfg(), 15, 300);
  bool ae_ok = ae6.report.realized == ae6.report.expected;
  bool pb_broken = pb1.report.realized != pb1.report.expected;
  bool spill = std::any_of(pb1.schedule.notes.begin(), pb1.schedule.notes.end(),
                           [](const std::string& n) { return n.find("spill-over") != std::string::npos; });

  auto sc = pb1.spec;
  sc.pauses[8] += 600;  // after likes
  sc.expectations.clear();
  Timing tm = R->timing();
  tm.word_ms = 300;
  auto s = compile_schedule(sc, R->table(), tm);
  Architecture arch(15, R->cfg());
  auto r = run_schedule(arch, s);
  bool paused_ok = realized_edges(s, r.log) == pb1.report.expected;
  report(14, "embedding timing", ae_ok && pb_broken && spill && paused_ok,
         std::string("AE6 ") + (ae_ok ? "complete" : "incomplete") + ", PB1 " +
             (pb_broken ? "incomplete" : "complete") + (spill ? " (spill-over)" : "") +
             ", PB1+600ms " + (paused_ok ? "complete" : "incomplete"));
}

// ---- 15

void round_trip(double elapsed_before) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string bad;
  std::vector<std::string> files;
  for (const auto& n : kCorpus) files.push_back(corpus(n));
  files.push_back(corpus("word_salad"));
  for (const auto& f : files) {
    auto sc = R->load(f);
    const auto& r = R->run(f, 15);
    const auto& s = R->schedule(f);
    std::set<Edge> want(sc.structure.edges.begin(), sc.structure.edges.end());
    std::set<RowEdge> want_rows;
    for (const auto& e : want) want_rows.insert({s.row_of(e.head), s.row_of(e.dep), e.sg});
    if (extract_bindings(r.log) != want_rows || realized_edges(s, r.log) != want) {
      ok = false;
      bad += " " + f;
    }
  }
  double total =
      elapsed_before + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (total > kMaxMinutes * 60) ok = false;
  report(15, "round-trip oracle", ok,
         std::to_string(files.size()) + " structures" + (bad.empty() ? "" : "; fails:" + bad) +
             "; suite " + fmt("%.0f s", total));
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  Runner runner;
  R = &runner;
  census_exactness();
  closed_form_census();
  circuit_behaviors();
  constituent_profile();
  category_dominance();
  size_scaling();
  peak_coincidence();
  ordering(8, "complexity ordering",
           {corpus("reporter_ac"), corpus("reporter_sr"), corpus("reporter_or")}, {"AC", "SR", "OR"});
  ordering(9, "ambiguity ordering",
           {"scenarios/amb_ua.txt", "scenarios/amb_ap.txt", "scenarios/amb_au.txt"},
           {"UA", "AP", "AU"}, "scenarios/amb_gp.txt", "GP");
  word_salad();
  question_answering();
  cell_signatures();
  scenarios();
  embedding_timing();
  round_trip(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  int failed = int(std::count_if(lines.begin(), lines.end(), [](const Line& l) { return !l.pass; }));
  std::printf("%d/%zu criteria pass\n", int(lines.size()) - failed, lines.size());
  return failed ? 1 : 0;
}
