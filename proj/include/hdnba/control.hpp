#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hdnba/blackboard.hpp"
#include "hdnba/grammar.hpp"
#include "hdnba/metrics.hpp"
#include "hdnba/structure.hpp"

namespace hdnba {

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Timing {
  int word_ms = 300;
  int lma_inhibit_ms = 20;
  int lma_bind_ms = 50;
  int queue_offset_ms = 70;
  int sg_select_ms = 40;
  int sg_in_ms = 100;
  int sa_inhibit_ms = 20;
  int op_gap_ms = 10;
  int lead_ms = 20;
  int tail_ms = 200;
  double level = 100.0;
  // question answering
  int qa_step_ms = 150;
  double qa_competition_level = 40.0;

  static Timing from_config(const Config& cfg);
};

struct ControlEvent {
  int at = 0;
  std::string signal;
  double level = 100.0;
  int duration = 1;
};

struct ControlSchedule {
  std::vector<ControlEvent> events;
  std::vector<int> onsets;  // per node, ms
  std::vector<int> rows;    // per node, 0-based blackboard row
  std::vector<Node> nodes;
  std::vector<Edge> target;  // edges the schedule is meant to realize
  Policy policy = Policy::Eager;
  int end_ms = 0;
  std::vector<std::string> notes;

  int row_of(int node_index) const;
  int node_at_row(int row) const;  // node index, or -1
};

std::string format_schedule(const ControlSchedule& s);

// Row layout starts at `first_row`; the architecture size is checked at run time.
ControlSchedule compile_schedule(const ScenarioSpec& sc, const LicensingTable& table,
                                 const Timing& timing, std::optional<Policy> policy = std::nullopt,
                                 int first_row = 0);
ControlSchedule compile_schedule(const StructureSpec& spec, const LicensingTable& table,
                                 const Timing& timing, Policy policy = Policy::Eager,
                                 int first_row = 0);

struct BindingEvent {
  int t_ms = 0;
  int head_row = 0;
  int dep_row = 0;
  StructureGroup sg = StructureGroup::Verb;
  std::optional<LexicalType> head_type, dep_type;
};

struct BindingLog {
  std::vector<BindingEvent> events;
};

using RowEdge = std::tuple<int, int, StructureGroup>;  // head row, dep row, sg
std::set<RowEdge> extract_bindings(const BindingLog& log);

struct CellProbe {
  int head_row = 0;
  int dep_row = 0;
};

struct RunOptions {
  bool record_trace = true;
  std::vector<CellProbe> probes;
  // Extra ticks appended after the schedule ends.
  int extra_ms = 0;
  // Peak word-population rate per row, tracked from this tick on.
  int word_peak_from = -1;
};

struct RunResult {
  ActivityTrace trace;
  BindingLog log;
  std::vector<CellSignature> probe_means;
  std::vector<double> word_peak;
  int start_clock = 0;
  int ticks = 0;
};

// Runs on the architecture's current state; the clock keeps advancing so that
// consecutive schedules continue one another.
RunResult run_schedule(Architecture& arch, const ControlSchedule& schedule,
                       const RunOptions& opt = {});

// Cell states: WM A of every cell above the sustain threshold.
std::set<std::pair<int, int>> bound_cells(const Architecture& arch);

// Realized edges in node-index terms.
std::set<Edge> realized_edges(const ControlSchedule& s, const BindingLog& log);

struct StoreResult {
  std::vector<ControlSchedule> schedules;
  std::vector<RunResult> runs;
  int rows_used = 0;
};

StoreResult store_sentences(Architecture& arch, const std::vector<StructureSpec>& specs,
                            const LicensingTable& table, const Timing& timing,
                            const RunOptions& opt = {});

struct AnswerResult {
  std::set<std::string> answers;
  std::vector<std::string> steps;
  RunResult run;
};

struct QuestionPlan {
  ControlSchedule schedule;
  std::vector<std::string> steps;
  int answer_from = -1;  // tick at which the answer phase starts; -1 if nothing matches
};

QuestionPlan compile_question(const StoreResult& store, const QuestionSpec& q, bool competition_on,
                              const Timing& timing);

AnswerResult answer_question(Architecture& arch, const StoreResult& store, const QuestionSpec& q,
                             bool competition_on, const Timing& timing);

struct ScenarioReport {
  std::string name;
  Policy policy = Policy::Delayed;
  std::set<Edge> expected;
  std::set<Edge> realized;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
  std::string text(const StructureSpec& spec) const;
};

ScenarioReport evaluate_scenario(const ScenarioSpec& sc, const ControlSchedule& s,
                                 const BindingLog& log);

const std::vector<std::string>& scenario_names();

struct ScenarioOutcome {
  ScenarioSpec spec;
  ControlSchedule schedule;
  RunResult run;
  ScenarioReport report;
};

ScenarioOutcome scenario_run(const std::string& name, const Config& cfg, int size = 15,
                             std::optional<int> word_ms = std::nullopt);

std::string describe_edge(const StructureSpec& spec, const Edge& e);

}  // namespace hdnba
