#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hdnba/control.hpp"
#include "svg.hpp"

using namespace hdnba;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_size(int n) {
  if (n < 2) throw UsageError("--size must be at least 2");
}

void check_word_ms(int ms) {
  if (ms < 100) throw UsageError("--word-ms must be at least 100");
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

void print_bindings(const ScenarioSpec& sc, const ControlSchedule& s, const RunResult& r) {
  const auto& spec = sc.structure;
  auto word = [&](int row) {
    const Node* nd = spec.find(s.node_at_row(row));
    if (!nd) return std::string("row") + std::to_string(row + 1);
    return std::string(type_name(nd->type)) + std::to_string(nd->index) +
           (nd->is_virtual() ? "" : "-" + nd->token);
  };
  std::cout << "bindings\n";
  for (const auto& e : r.log.events)
    std::cout << "  t=" << e.t_ms << "  " << word(e.dep_row) << " -" << sg_label(e.sg) << "-> "
              << word(e.head_row) << "\n";
  for (const auto& n : s.notes) std::cout << "note: " << n << "\n";
}

ControlSchedule compile_for(ScenarioSpec& sc, const LicensingTable& table, Timing tm,
                            std::optional<Policy> policy, std::optional<int> word_ms) {
  if (sc.word_ms) tm.word_ms = *sc.word_ms;
  if (word_ms) tm.word_ms = *word_ms;
  return compile_schedule(sc, table, tm, policy);
}

// ---- run

int cmd_run(const std::string& path, int n, const std::string& trace_out,
            const std::string& policy_s, int word_ms) {
  check_size(n);
  std::optional<int> wm;
  if (word_ms > 0) {
    check_word_ms(word_ms);
    wm = word_ms;
  }
  std::optional<Policy> policy;
  if (!policy_s.empty()) {
    policy = parse_policy(policy_s);
    if (!policy) throw UsageError("--policy must be eager or delayed");
  }
  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto sc = load_scenario(path);
  auto violations = validate_structure(sc.structure, table);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << path << ": " << v.message << "\n";
    return 1;
  }
  auto sched = compile_for(sc, table, Timing::from_config(cfg), policy, wm);
  Architecture arch(n, cfg);
  auto r = run_schedule(arch, sched);
  std::cout << "structure " << sc.structure.name << "  W" << n << "  policy "
            << policy_name(sched.policy) << "  " << r.ticks << " ms\n";
  print_bindings(sc, sched, r);
  auto rep = evaluate_scenario(sc, sched, r.log);
  std::cout << rep.text(sc.structure);
  std::printf("sums  total %.6g  gating %.6g  wm %.6g  other %.6g\n", r.trace.sum(Series::Total),
              r.trace.sum(Series::Gating), r.trace.sum(Series::WM), r.trace.sum(Series::Other));
  if (!trace_out.empty()) {
    export_trace(r.trace, trace_out);
    std::cout << "trace written to " << trace_out << "\n";
  }
  return rep.pass() ? 0 : 1;
}

// ---- scenario suite

int cmd_scenarios(std::vector<std::string> names, int n, int word_ms) {
  check_size(n);
  std::optional<int> wm;
  if (word_ms > 0) {
    check_word_ms(word_ms);
    wm = word_ms;
  }
  if (names.empty()) names = scenario_names();
  auto cfg = load_default_config();
  int failed = 0;
  for (const auto& name : names) {
    auto o = scenario_run(name, cfg, n, wm);
    std::cout << o.report.text(o.spec.structure);
    for (const auto& note : o.schedule.notes) std::cout << "  note: " << note << "\n";
    if (!o.report.pass()) ++failed;
  }
  std::cout << names.size() - failed << "/" << names.size() << " scenarios pass\n";
  return failed ? 1 : 0;
}

// ---- query

int cmd_query(const std::vector<std::string>& store, const std::string& ask, bool no_comp, int n) {
  check_size(n);
  if (store.empty()) throw UsageError("--store needs at least one structure file");
  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto tm = Timing::from_config(cfg);
  std::vector<StructureSpec> specs;
  for (const auto& f : store) specs.push_back(load_structure(f));
  auto q = parse_question(ask);
  Architecture arch(n, cfg);
  auto st = store_sentences(arch, specs, table, tm);
  auto res = answer_question(arch, st, q, !no_comp, tm);
  for (const auto& s : res.steps) std::cout << "step: " << s << "\n";
  std::cout << "answer:";
  for (const auto& a : res.answers) std::cout << " " << a;
  std::cout << "\n";
  return 0;
}

// ---- sweep

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError("bad size '" + tok + "'");
    }
    check_size(out.back());
  }
  if (out.empty()) throw UsageError("--sizes is empty");
  return out;
}

int cmd_sweep(const std::vector<std::string>& files, const std::string& sizes_s,
              const std::string& out) {
  auto sizes = parse_sizes(sizes_s);
  if (files.empty()) throw UsageError("--structure needs at least one file");
  fs::create_directories(out);
  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto tm = Timing::from_config(cfg);
  std::vector<ScenarioSpec> specs;
  std::vector<ControlSchedule> scheds;
  for (const auto& f : files) {
    specs.push_back(load_scenario(f));
    scheds.push_back(compile_for(specs.back(), table, tm, std::nullopt, std::nullopt));
  }
  // sums[size][structure]
  std::vector<std::vector<double>> sums(sizes.size(), std::vector<double>(files.size()));
  std::ofstream tab(out + "/relative_sums.csv");
  tab << "size,structure,total,gating,wm,other,rel_structure,rel_size\n";
  for (size_t i = 0; i < sizes.size(); ++i) {
    for (size_t k = 0; k < files.size(); ++k) {
      Architecture arch(sizes[i], cfg);
      auto r = run_schedule(arch, scheds[k]);
      std::string csv = out + "/" + stem(files[k]) + "_W" + std::to_string(sizes[i]) + ".csv";
      export_trace(r.trace, csv);
      sums[i][k] = r.trace.sum(Series::Total);
      char line[256];
      std::snprintf(line, sizeof line, "%d,%s,%.6g,%.6g,%.6g,%.6g,%.6f,%.6f\n", sizes[i],
                    stem(files[k]).c_str(), sums[i][k], r.trace.sum(Series::Gating),
                    r.trace.sum(Series::WM), r.trace.sum(Series::Other),
                    sums[i][k] / sums[i][0], sums[i][k] / sums[0][k]);
      tab << line;
    }
  }
  std::printf("%-6s", "size");
  for (const auto& f : files) std::printf(" %14s", stem(f).c_str());
  std::printf("\n");
  for (size_t i = 0; i < sizes.size(); ++i) {
    std::printf("W%-5d", sizes[i]);
    for (size_t k = 0; k < files.size(); ++k) std::printf(" %14.4f", sums[i][k] / sums[i][0]);
    std::printf("\n");
  }
  std::cout << "relative to " << stem(files[0]) << " at each size; table in " << out
            << "/relative_sums.csv\n";
  return 0;
}

// ---- corpus

int cmd_corpus(const std::string& dir, int n) {
  check_size(n);
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
  std::vector<fs::path> dirs;
  for (const auto* sub : {"corpus", "scenarios"})
    if (fs::is_directory(fs::path(dir) / sub)) dirs.push_back(fs::path(dir) / sub);
  if (dirs.empty()) dirs.push_back(dir);
  for (const auto& d : dirs)
    for (const auto& e : fs::directory_iterator(d))
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  if (files.empty()) throw UsageError("no structure files in " + dir);
  std::sort(files.begin(), files.end());

  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto tm = Timing::from_config(cfg);
  int failed = 0;
  for (const auto& f : files) {
    std::string label = f.parent_path().filename().string() + "/" + f.filename().string();
    try {
      auto sc = load_scenario(f.string());
      auto v = validate_structure(sc.structure, table);
      if (!v.empty()) {
        std::cout << "FAIL " << label << ": " << v.front().message << "\n";
        ++failed;
        continue;
      }
      auto text = format_structure(sc.structure);
      auto again = parse_structure(text, label);
      if (again.nodes.size() != sc.structure.nodes.size() || again.edges != sc.structure.edges) {
        std::cout << "FAIL " << label << ": text round-trip differs\n";
        ++failed;
        continue;
      }
      auto s = compile_for(sc, table, tm, std::nullopt, std::nullopt);
      Architecture arch(n, cfg);
      auto r = run_schedule(arch, s);
      auto rep = evaluate_scenario(sc, s, r.log);
      if (rep.pass()) {
        std::cout << "ok   " << label << "\n";
      } else {
        std::cout << "FAIL " << label << ":";
        for (const auto& x : rep.failures) std::cout << " " << x << ";";
        std::cout << "\n";
        ++failed;
      }
    } catch (const std::exception& e) {
      std::cout << "FAIL " << label << ": " << e.what() << "\n";
      ++failed;
    }
  }
  std::cout << files.size() - failed << "/" << files.size() << " files pass\n";
  return failed ? 1 : 0;
}

// ---- svg

int cmd_svg(const std::vector<std::string>& in, const std::string& out, const std::string& series_s,
            bool normalize, const std::string& title) {
  if (in.empty()) throw UsageError("--in needs at least one CSV");
  std::vector<Series> series;
  std::stringstream ss(series_s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "total") series.push_back(Series::Total);
    else if (tok == "gating") series.push_back(Series::Gating);
    else if (tok == "wm") series.push_back(Series::WM);
    else if (tok == "other") series.push_back(Series::Other);
    else throw UsageError("unknown series '" + tok + "'");
  }
  std::vector<ActivityTrace> traces;
  std::vector<std::string> labels;
  for (const auto& f : in) {
    traces.push_back(read_trace(f));
    labels.push_back(stem(f));
  }
  auto chart = tools::chart_from_traces(traces, labels, series, normalize);
  chart.title = title;
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  os << tools::render_svg(chart);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdnba: neural blackboard sentence simulator"};
  app.require_subcommand(1);

  int size = 15;
  auto* census = app.add_subcommand("census", "population counts of an architecture");
  census->add_option("--size,-n", size, "architecture size n (rows)")->required();

  std::string structure, trace, policy;
  int word_ms = 0;
  auto* run = app.add_subcommand("run", "compile and simulate a structure or scenario file");
  run->add_option("--structure,-s", structure, "structure file")->required();
  run->add_option("--size,-n", size, "architecture size");
  run->add_option("--trace,-t", trace, "write the activity trace CSV here");
  run->add_option("--policy", policy, "eager or delayed");
  run->add_option("--word-ms", word_ms, "word window length");

  std::vector<std::string> names;
  auto* scen = app.add_subcommand("scenario", "run bundled parsing scenarios");
  scen->add_option("names", names, "scenario names (default: all)");
  scen->add_option("--size,-n", size, "architecture size");
  scen->add_option("--word-ms", word_ms, "word window length");

  std::vector<std::string> store;
  std::string ask;
  bool no_comp = false;
  auto* query = app.add_subcommand("query", "store sentences and answer a question");
  query->add_option("--store", store, "structure files")->required();
  query->add_option("--ask", ask, "question, e.g. \"Sue likes ?\"")->required();
  query->add_flag("--no-competition", no_comp, "disable answer competition");
  query->add_option("--size,-n", size, "architecture size");

  std::vector<std::string> sweep_files;
  std::string sizes = "15,20,25,30", out = "sweep";
  auto* sweep = app.add_subcommand("sweep", "traces and summed activity over sizes");
  sweep->add_option("--structure,-s", sweep_files, "structure files")->required();
  sweep->add_option("--sizes", sizes, "comma separated sizes");
  sweep->add_option("--out,-o", out, "output directory");

  std::string dir = data_dir();
  auto* corpus = app.add_subcommand("corpus", "validate and round-trip bundled structures");
  corpus->add_option("--dir", dir, "data directory or a directory of structure files");
  corpus->add_option("--size,-n", size, "architecture size");

  std::vector<std::string> svg_in;
  std::string svg_out = "trace.svg", series = "total,gating,wm,other", title;
  bool normalize = false;
  auto* svg = app.add_subcommand("svg", "render trace CSVs as an SVG line chart");
  svg->add_option("--in,-i", svg_in, "trace CSV files")->required();
  svg->add_option("--out,-o", svg_out, "SVG file");
  svg->add_option("--series", series, "comma separated: total,gating,wm,other");
  svg->add_flag("--normalize", normalize, "scale each line to peak 100");
  svg->add_option("--title", title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (*census) {
      check_size(size);
      Architecture arch(size, load_default_config());
      auto c = arch.census();
      std::cout << format_census(size, c);
      if (c != census_formula(size)) {
        std::cerr << "census differs from the closed-form counts\n";
        return 1;
      }
      return 0;
    }
    if (*run) return cmd_run(structure, size, trace, policy, word_ms);
    if (*scen) return cmd_scenarios(names, size, word_ms);
    if (*query) return cmd_query(store, ask, no_comp, size);
    if (*sweep) return cmd_sweep(sweep_files, sizes, out);
    if (*corpus) return cmd_corpus(dir, size);
    if (*svg) return cmd_svg(svg_in, svg_out, series, normalize, title);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
