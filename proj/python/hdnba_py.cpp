#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdnba/control.hpp"

namespace py = pybind11;
using namespace hdnba;

namespace {

py::dict census_dict(int n) {
  auto c = Architecture(n, load_default_config()).census();
  py::dict d;
  d["gating"] = c.gating;
  d["working_memory"] = c.working_memory;
  d["other"] = c.other;
  d["blackboard_total"] = c.blackboard_total;
  d["external"] = c.external;
  d["simulation_total"] = c.simulation_total;
  d["wilson_cowan_units"] = c.wilson_cowan_units;
  return d;
}

py::dict trace_dict(const ActivityTrace& t) {
  py::dict d;
  d["total"] = t.total;
  d["gating"] = t.gating;
  d["wm"] = t.wm;
  d["other"] = t.other;
  d["onsets"] = t.onsets();
  return d;
}

py::list edge_list(const StructureSpec& spec, const std::set<Edge>& edges) {
  py::list out;
  for (const auto& e : edges) out.append(describe_edge(spec, e));
  return out;
}

py::dict run_file(const std::string& path, int size, std::optional<std::string> policy,
                  bool trace) {
  auto sc = load_scenario(path);
  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto v = validate_structure(sc.structure, table);
  if (!v.empty()) throw GrammarError(path + ": structure violates the licensing table");
  std::optional<Policy> pol;
  if (policy) {
    pol = parse_policy(*policy);
    if (!pol) throw std::invalid_argument("unknown policy " + *policy);
  }
  auto sched = compile_schedule(sc, table, Timing::from_config(cfg), pol);
  Architecture arch(size, cfg);
  RunOptions opt;
  opt.record_trace = true;
  auto r = run_schedule(arch, sched, opt);
  auto rep = evaluate_scenario(sc, sched, r.log);
  py::dict d;
  d["name"] = sc.structure.name;
  d["policy"] = policy_name(sched.policy);
  d["ms"] = sched.end_ms;
  d["pass"] = rep.pass();
  d["realized"] = edge_list(sc.structure, rep.realized);
  d["expected"] = edge_list(sc.structure, rep.expected);
  d["notes"] = sched.notes;
  py::dict sums;
  sums["total"] = r.trace.sum(Series::Total);
  sums["gating"] = r.trace.sum(Series::Gating);
  sums["wm"] = r.trace.sum(Series::WM);
  sums["other"] = r.trace.sum(Series::Other);
  d["sums"] = sums;
  if (trace) d["trace"] = trace_dict(r.trace);
  return d;
}

std::vector<std::string> query(const std::vector<std::string>& store, const std::string& question,
                               bool competition, int size) {
  auto cfg = load_default_config();
  auto table = LicensingTable::load_default();
  auto tm = Timing::from_config(cfg);
  std::vector<StructureSpec> specs;
  for (const auto& p : store) specs.push_back(load_structure(p));
  Architecture arch(size, cfg);
  auto st = store_sentences(arch, specs, table, tm);
  auto res = answer_question(arch, st, parse_question(question), competition, tm);
  return {res.answers.begin(), res.answers.end()};
}

py::dict scenario(const std::string& name, int size) {
  auto o = scenario_run(name, load_default_config(), size);
  py::dict d;
  d["name"] = name;
  d["policy"] = policy_name(o.schedule.policy);
  d["pass"] = o.report.pass();
  d["failures"] = o.report.failures;
  d["text"] = o.report.text(o.spec.structure);
  return d;
}

}  // namespace

PYBIND11_MODULE(_hdnba, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<GrammarError>(m, "GrammarError", PyExc_ValueError);
  py::register_exception<CompileError>(m, "CompileError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<ArchitectureError>(m, "ArchitectureError", PyExc_ValueError);

  m.def("data_dir", &data_dir);
  m.def("census", &census_dict, py::arg("size"));
  m.def("run", &run_file, py::arg("path"), py::arg("size") = 15, py::arg("policy") = py::none(),
        py::arg("trace") = false);
  m.def("query", &query, py::arg("store"), py::arg("question"), py::arg("competition") = true,
        py::arg("size") = 15);
  m.def("scenario_names", &scenario_names);
  m.def("scenario", &scenario, py::arg("name"), py::arg("size") = 15);
}
