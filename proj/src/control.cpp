#include "hdnba/control.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hdnba {

Timing Timing::from_config(const Config& cfg) {
  Timing t;
  auto rd = [&](const char* key, int& v) {
    if (cfg.has(key)) v = cfg.get_int(key);
  };
  rd("word_ms", t.word_ms);
  rd("lma_inhibit_ms", t.lma_inhibit_ms);
  rd("lma_bind_ms", t.lma_bind_ms);
  rd("queue_offset_ms", t.queue_offset_ms);
  rd("sg_select_ms", t.sg_select_ms);
  rd("sg_in_ms", t.sg_in_ms);
  rd("sa_inhibit_ms", t.sa_inhibit_ms);
  rd("op_gap_ms", t.op_gap_ms);
  rd("lead_ms", t.lead_ms);
  rd("tail_ms", t.tail_ms);
  rd("qa_step_ms", t.qa_step_ms);
  t.level = cfg.get("signal_level", t.level);
  t.qa_competition_level = cfg.get("qa_competition_level", t.qa_competition_level);
  if (t.word_ms < 100) throw ConfigError("word_ms must be at least 100");
  return t;
}

int ControlSchedule::row_of(int node_index) const {
  for (size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].index == node_index) return rows[k];
  return -1;
}

int ControlSchedule::node_at_row(int row) const {
  for (size_t k = 0; k < rows.size(); ++k)
    if (rows[k] == row) return nodes[k].index;
  return -1;
}

std::string format_schedule(const ControlSchedule& s) {
  std::ostringstream os;
  for (const auto& e : s.events)
    os << e.at << " " << e.signal << " " << e.level << " " << e.duration << "\n";
  return os.str();
}

std::string describe_edge(const StructureSpec& spec, const Edge& e) {
  auto name = [&](int idx) {
    auto* n = spec.find(idx);
    if (!n) return std::to_string(idx);
    return std::string(type_name(n->type)) + std::to_string(idx) +
           (n->is_virtual() ? "" : "(" + n->token + ")");
  };
  return name(e.dep) + " -" + sg_label(e.sg) + "-> " + name(e.head);
}

namespace {

const char* side_key(Side s) { return s == Side::Head ? "H" : "D"; }

struct Binding {
  Edge edge;
  int dep_pos = 0, head_pos = 0;
  int cw = 0;  // commit window (node position)
  bool preferred = false;
};

struct Entry {
  int pos = 0;
  Side side = Side::Head;
  StructureGroup sg = StructureGroup::Verb;
  int sel_w = 0;
  std::vector<int> bindings;  // indices into the binding list
  bool live = false;
  bool dead = false;
  bool after_commits = false;
};

struct Compiler {
  const std::vector<Node>& nodes;
  const Timing& tm;
  std::vector<Binding> bindings;
  std::vector<Entry> entries;
  ControlSchedule out;

  Compiler(const std::vector<Node>& n, const Timing& t) : nodes(n), tm(t) {}

  int entry_for(int pos, Side side, StructureGroup g) {
    for (size_t k = 0; k < entries.size(); ++k)
      if (entries[k].pos == pos && entries[k].side == side && entries[k].sg == g)
        return static_cast<int>(k);
    Entry e;
    e.pos = pos;
    e.side = side;
    e.sg = g;
    e.sel_w = pos;
    entries.push_back(e);
    return static_cast<int>(entries.size() - 1);
  }

  int first_commit(const Entry& e) const {
    int w = INT_MAX;
    for (int b : e.bindings) w = std::min(w, bindings[b].cw);
    return w;
  }
  int last_commit(const Entry& e) const {
    int w = -1;
    for (int b : e.bindings) w = std::max(w, bindings[b].cw);
    return w;
  }

  bool lma_available(int pos, int until) const {
    for (int p = pos + 1; p <= until && p < static_cast<int>(nodes.size()); ++p)
      if (nodes[p].type == nodes[pos].type) return false;
    return true;
  }

  // Keeps at most two consumable selections of one SG on one side pending at
  // any commit; older ones are selected later, at their own commit.
  void postpone() {
    // a row selecting one SG on both sides at once would bind to itself
    for (auto& e : entries) {
      if (e.side != Side::Head || e.bindings.empty()) continue;
      bool twin = false;
      for (const auto& d : entries)
        if (d.pos == e.pos && d.side == Side::Dependent && d.sg == e.sg) twin = true;
      int fc = first_commit(e);
      if (!twin) continue;
      if (fc == e.sel_w) {
        // the head side binds first; the dependent side waits for it
        for (auto& d : entries)
          if (d.pos == e.pos && d.side == Side::Dependent && d.sg == e.sg && d.sel_w == e.sel_w &&
              first_commit(d) > d.sel_w)
            d.after_commits = true;
        continue;
      }
      if (fc < e.sel_w) continue;
      if (lma_available(e.pos, fc))
        e.sel_w = fc;
      else
        e.after_commits = true;
    }
    for (int iter = 0; iter < 64; ++iter) {
      bool changed = false;
      for (const auto& b : bindings) {
        for (Side side : {Side::Head, Side::Dependent}) {
          std::vector<int> live;
          for (size_t k = 0; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (e.side != side || e.sg != b.edge.sg || e.bindings.empty()) continue;
            if (e.sel_w <= b.cw && last_commit(e) >= b.cw) live.push_back(static_cast<int>(k));
          }
          if (live.size() <= 2) continue;
          std::sort(live.begin(), live.end(),
                    [&](int x, int y) { return entries[x].sel_w < entries[y].sel_w; });
          bool done = false;
          for (int k : live) {
            auto& e = entries[k];
            int fc = first_commit(e);
            if (e.sel_w >= fc || !lma_available(e.pos, fc)) continue;
            e.sel_w = fc;
            out.notes.push_back("selection of " + sg_long_name(e.sg) + " for " +
                                type_name(nodes[e.pos].type) +
                                std::to_string(nodes[e.pos].index) + " postponed");
            done = changed = true;
            break;
          }
          if (!done && iter == 0)
            out.notes.push_back("more than two pending " + sg_long_name(b.edge.sg) +
                                " selections on one side");
        }
      }
      if (!changed) break;
    }
  }

  void emit(int at, const std::string& sig, int dur, double level = -1) {
    out.events.push_back({at, sig, level < 0 ? tm.level : level, dur});
  }

  std::string type_of(int pos) const { return type_name(nodes[pos].type); }

  std::map<StructureGroup, int> sa_free;  // end of the last SA inhibition per SG

  int select(int cursor, int pos, Side side, const std::vector<StructureGroup>& sgs) {
    for (auto g : sgs) cursor = std::max(cursor, sa_free[g]);
    emit(cursor, std::string("select.") + side_key(side) + "." + type_of(pos), tm.sg_select_ms);
    for (auto g : sgs)
      emit(cursor, std::string("sgbind.") + side_key(side) + "." + sg_label(g), tm.sg_select_ms);
    return cursor + tm.sg_select_ms + tm.op_gap_ms;
  }
};

}  // namespace

ControlSchedule compile_schedule(const ScenarioSpec& sc, const LicensingTable& table,
                                 const Timing& timing, std::optional<Policy> policy_override,
                                 int first_row) {
  const StructureSpec& spec = sc.structure;
  Policy policy = policy_override ? *policy_override : sc.policy.value_or(Policy::Eager);
  Timing tm = timing;
  if (sc.word_ms) tm.word_ms = *sc.word_ms;
  if (tm.word_ms < 100) throw CompileError("word_ms must be at least 100");

  for (const auto& v : validate_structure(spec, table))
    throw CompileError(spec.name + ": " + v.message);

  Compiler c(spec.nodes, tm);
  c.out.nodes = spec.nodes;
  c.out.target = spec.edges;
  c.out.policy = policy;
  int m = static_cast<int>(spec.nodes.size());

  auto add_binding = [&](const Edge& e, std::optional<int> at, bool preferred) {
    const auto& dn = spec.node(e.dep);
    const auto& hn = spec.node(e.head);
    if (!table.is_licensed(hn.type, dn.type, e.sg))
      throw CompileError(spec.name + ": unlicensed edge " + describe_edge(spec, e));
    Binding b;
    b.edge = e;
    b.dep_pos = spec.position(e.dep);
    b.head_pos = spec.position(e.head);
    int later = std::max(b.dep_pos, b.head_pos);
    b.cw = at ? spec.position(*at) : later;
    b.preferred = preferred;
    if (b.cw < later)
      throw CompileError(spec.name + ": commit of " + describe_edge(spec, e) +
                         " before both words are present");
    c.bindings.push_back(b);
    int id = static_cast<int>(c.bindings.size() - 1);
    c.entries[c.entry_for(b.head_pos, Side::Head, e.sg)].bindings.push_back(id);
    c.entries[c.entry_for(b.dep_pos, Side::Dependent, e.sg)].bindings.push_back(id);
  };

  if (policy == Policy::Eager)
    for (const auto& p : sc.prefers) add_binding(p.edge, p.at, true);
  for (const auto& e : spec.edges) {
    std::optional<int> at;
    for (const auto& cm : sc.commits)
      if (cm.edge == e) at = cm.at;
    add_binding(e, at, false);
  }
  for (const auto& o : sc.options) {
    if (o.dep >= 0) c.entry_for(spec.position(o.dep), Side::Dependent, o.sg);
    if (o.head >= 0) c.entry_for(spec.position(o.head), Side::Head, o.sg);
  }

  c.postpone();

  // Node windows.
  std::vector<int> onset(m), window(m);
  int t = tm.lead_ms;
  for (int p = 0; p < m; ++p) {
    onset[p] = t;
    int extra = 0;
    auto it = sc.pauses.find(spec.nodes[p].index);
    if (it != sc.pauses.end()) extra = it->second;
    window[p] = tm.word_ms + extra;
    t += window[p];
  }
  c.out.onsets = onset;
  for (int p = 0; p < m; ++p) c.out.rows.push_back(first_row + p);

  std::map<LexicalType, int> busy_until;
  int cursor = 0;
  for (int p = 0; p < m; ++p) {
    const Node& nd = spec.nodes[p];
    std::string row = std::to_string(first_row + p + 1);
    c.emit(onset[p], "word." + row, window[p]);
    // Commits due in this window, most recent partner first.
    std::vector<int> due;
    for (size_t b = 0; b < c.bindings.size(); ++b)
      if (c.bindings[b].cw == p) due.push_back(static_cast<int>(b));
    auto partner_age = [&](int b) {
      const auto& bd = c.bindings[b];
      int eh = c.entry_for(bd.head_pos, Side::Head, bd.edge.sg);
      int ed = c.entry_for(bd.dep_pos, Side::Dependent, bd.edge.sg);
      return std::min(c.entries[eh].sel_w * 1000 + bd.head_pos,
                      c.entries[ed].sel_w * 1000 + bd.dep_pos);
    };
    std::stable_sort(due.begin(), due.end(), [&](int a, int b) {
      auto ga = c.bindings[a].edge.sg, gb = c.bindings[b].edge.sg;
      bool fa = ga == StructureGroup::ExMod, fb = gb == StructureGroup::ExMod;
      if (fa != fb) return fa;
      if (c.bindings[a].preferred != c.bindings[b].preferred) return c.bindings[a].preferred;
      return partner_age(a) > partner_age(b);
    });
    std::map<int, int> remaining_uses;  // entry -> pending bindings
    for (size_t k = 0; k < c.entries.size(); ++k) {
      int pending = 0;
      for (int b : c.entries[k].bindings) pending += c.bindings[b].cw >= p;
      remaining_uses[static_cast<int>(k)] = pending;
    }
    auto commit = [&](int b) {
      const auto& bd = c.bindings[b];
      int eh = c.entry_for(bd.head_pos, Side::Head, bd.edge.sg);
      int ed = c.entry_for(bd.dep_pos, Side::Dependent, bd.edge.sg);
      for (int k : {eh, ed}) {
        auto& e = c.entries[k];
        if (e.live) continue;
        if (e.dead)
          c.out.notes.push_back("selection for " + describe_edge(spec, bd.edge) +
                                " was cleared in its row");
        else if (!c.lma_available(e.pos, p))
          c.out.notes.push_back("re-selection for " + describe_edge(spec, bd.edge) +
                                " after its LMA was replaced");
        if (e.dead) continue;
        cursor = c.select(cursor, e.pos, e.side, {e.sg});
        e.live = true;
      }
      std::string g = sg_label(bd.edge.sg);
      cursor = std::max(cursor, c.sa_free[bd.edge.sg]);
      c.emit(cursor, "sgin.H." + g, tm.sg_in_ms);
      c.emit(cursor, "sgin.D." + g, tm.sg_in_ms);
      cursor += tm.sg_in_ms + tm.op_gap_ms;
      bool any = false;
      for (int k : {eh, ed}) {
        auto& e = c.entries[k];
        // a preferred choice also closes the selection for its rivals
        if (--remaining_uses[k] > 0 && !bd.preferred) continue;
        c.emit(cursor, std::string("sainh.") + side_key(e.side) + "." + g, tm.sa_inhibit_ms);
        e.live = false;
        if (bd.preferred) e.dead = true;
        any = true;
      }
      // other SGs may proceed during the inhibition
      if (any) c.sa_free[bd.edge.sg] = cursor + tm.sa_inhibit_ms + tm.op_gap_ms;
      if (bd.edge.sg != StructureGroup::Gap)
        for (auto& e : c.entries)
          if (e.pos == bd.dep_pos && e.side == Side::Dependent && e.sg != bd.edge.sg &&
              e.sg != StructureGroup::Gap)
            e.dead = true;
    };
    int bind_at = std::max(onset[p], busy_until.count(nd.type) ? busy_until[nd.type] : 0);
    bool lost = bind_at + tm.lma_inhibit_ms + tm.lma_bind_ms > onset[p] + window[p];
    if (lost)
      c.out.notes.push_back("spill-over: " + std::string(type_name(nd.type)) +
                            std::to_string(nd.index) +
                            " word population ends before its LMA can bind");
    else if (bind_at > onset[p])
      c.out.notes.push_back("spill-over: LMA binding of " + std::string(type_name(nd.type)) +
                            std::to_string(nd.index) + " delayed by " +
                            std::to_string(bind_at - onset[p]) + " ms");
    if (!lost) {
      c.emit(bind_at, std::string("inhibit.") + type_name(nd.type), tm.lma_inhibit_ms);
      c.emit(bind_at + tm.lma_inhibit_ms, std::string("bind.") + type_name(nd.type),
             tm.lma_bind_ms);
    }
    cursor = std::max(cursor, bind_at + tm.queue_offset_ms);

    // Selections due in this window, one batch per node and side.
    std::map<std::pair<int, int>, std::vector<int>> batches;
    for (size_t k = 0; k < c.entries.size(); ++k) {
      const auto& e = c.entries[k];
      if (e.sel_w == p && !e.dead) batches[{e.pos == p ? -1 : e.pos, index_of(e.side)}].push_back(k);
    }
    // dependent side first, then head side; this node before postponed ones
    std::vector<std::pair<std::pair<int, int>, std::vector<int>>> order(batches.begin(),
                                                                         batches.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first.first != b.first.first) return a.first.first < b.first.first;
      return a.first.second > b.first.second;
    });
    auto run_batches = [&](bool late) {
      for (auto& [key, ids] : order) {
        int pos = key.first < 0 ? p : key.first;
        std::vector<StructureGroup> sgs;
        for (int k : ids) {
          if (c.entries[k].after_commits != late) continue;
          sgs.push_back(c.entries[k].sg);
          c.entries[k].live = true;
        }
        if (!sgs.empty()) cursor = c.select(cursor, pos, static_cast<Side>(key.second), sgs);
      }
    };    run_batches(false);
    for (int b : due) commit(b);
    run_batches(true);
    busy_until[nd.type] = std::max(cursor, bind_at + tm.lma_inhibit_ms + tm.lma_bind_ms);
  }
  int last = m ? onset[m - 1] + window[m - 1] : tm.lead_ms;
  c.out.end_ms = std::max(cursor, last) + tm.tail_ms;
  std::stable_sort(c.out.events.begin(), c.out.events.end(),
                   [](const ControlEvent& a, const ControlEvent& b) { return a.at < b.at; });
  return c.out;
}

ControlSchedule compile_schedule(const StructureSpec& spec, const LicensingTable& table,
                                 const Timing& timing, Policy policy, int first_row) {
  ScenarioSpec sc;
  sc.structure = spec;
  return compile_schedule(sc, table, timing, policy, first_row);
}

namespace {

struct SignalDriver {
  std::vector<std::vector<std::pair<int, double>>> starts, stops;  // by tick
  std::map<PopId, std::multiset<double>> active;

  void apply(Network& net, int tick) {
    if (tick < 0 || tick >= static_cast<int>(starts.size())) return;
    for (auto& [p, lv] : stops[tick]) {
      auto& s = active[p];
      auto it = s.find(lv);
      if (it != s.end()) s.erase(it);
      net.set_input(p, s.empty() ? 0.0 : *s.rbegin());
    }
    for (auto& [p, lv] : starts[tick]) {
      auto& s = active[p];
      s.insert(lv);
      net.set_input(p, *s.rbegin());
    }
  }
};

PopId resolve(const Architecture& arch, const std::string& name) {
  if (name.rfind("word.", 0) == 0) {
    int row = std::stoi(name.substr(5));
    if (row < 1 || row > arch.size())
      throw CapacityError("schedule needs row " + std::to_string(row) +
                          " but the architecture has " + std::to_string(arch.size()));
    return arch.signals().word_line[row - 1];
  }
  PopId p = arch.signals().find(name);
  if (p == kNoPop) throw CompileError("unknown control signal " + name);
  return p;
}

}  // namespace

RunResult run_schedule(Architecture& arch, const ControlSchedule& schedule, const RunOptions& opt) {
  Network& net = arch.net();
  const int n = arch.size();
  for (int r : schedule.rows)
    if (r >= n)
      throw CapacityError("structure needs " + std::to_string(r + 1) + " rows but W" +
                          std::to_string(n) + " has " + std::to_string(n));
  int ticks = schedule.end_ms + opt.extra_ms;
  SignalDriver drv;
  drv.starts.resize(ticks + 1);
  drv.stops.resize(ticks + 1);
  std::map<std::string, PopId> cache;
  for (const auto& e : schedule.events) {
    auto it = cache.find(e.signal);
    PopId p = it != cache.end() ? it->second : (cache[e.signal] = resolve(arch, e.signal));
    if (e.at >= ticks) continue;
    drv.starts[e.at].push_back({p, e.level});
    drv.stops[std::min(ticks, e.at + e.duration)].push_back({p, e.level});
  }
  std::vector<int> marker(ticks, 0);
  for (size_t k = 0; k < schedule.onsets.size(); ++k)
    if (schedule.onsets[k] < ticks) marker[schedule.onsets[k]] = static_cast<int>(k) + 1;

  RunResult res;
  res.start_clock = static_cast<int>(net.clock());
  res.ticks = ticks;
  res.trace.size = n;
  res.trace.fingerprint = arch.config().fingerprint();

  const double open = arch.thresholds().open;
  std::vector<char> logged(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (net.e(arch.cell(i, j).lbg.wms[0].a) > open) logged[i * n + j] = 1;

  std::vector<CellSignature> acc(opt.probes.size());
  if (opt.word_peak_from >= 0) res.word_peak.assign(n, 0.0);
  auto type_at = [&](int row) -> std::optional<LexicalType> {
    int idx = schedule.node_at_row(row);
    for (const auto& nd : schedule.nodes)
      if (nd.index == idx) return nd.type;
    return std::nullopt;
  };

  for (int tk = 0; tk < ticks; ++tk) {
    drv.apply(net, tk);
    net.step();
    if (opt.record_trace) {
      double g, w, o;
      arch.category_sums(g, w, o);
      res.trace.push(g, w, o, marker[tk]);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (logged[i * n + j]) continue;
        if (net.e(arch.cell(i, j).lbg.wms[0].a) <= open) continue;
        logged[i * n + j] = 1;
        BindingEvent ev;
        ev.t_ms = tk;
        ev.head_row = i;
        ev.dep_row = j;
        double best = -1;
        for (auto g : all_structure_groups()) {
          double h = net.output(arch.row(i).side[0].sg[index_of(g)].sg_in);
          double d = net.output(arch.row(j).side[1].sg[index_of(g)].sg_in);
          if (std::min(h, d) > best) {
            best = std::min(h, d);
            ev.sg = g;
          }
        }
        ev.head_type = type_at(i);
        ev.dep_type = type_at(j);
        res.log.events.push_back(ev);
      }
    }
    if (opt.word_peak_from >= 0 && tk >= opt.word_peak_from)
      for (int r = 0; r < n; ++r)
        res.word_peak[r] = std::max(res.word_peak[r], net.e(arch.row(r).word));
    for (size_t k = 0; k < opt.probes.size(); ++k) {
      const auto& top = arch.cell(opt.probes[k].head_row, opt.probes[k].dep_row).lbg;
      acc[k].wm += net.output(top.wms[0].a);
      acc[k].start += net.output(top.top.start);
      acc[k].dis += net.output(top.top.dis);
      acc[k].inhib += net.output(top.top.inhib);
      acc[k].gate += net.output(top.top.gate);
    }
  }
  drv.apply(net, ticks);
  for (auto& a : acc) {
    a.wm /= ticks;
    a.start /= ticks;
    a.dis /= ticks;
    a.inhib /= ticks;
    a.gate /= ticks;
  }
  res.probe_means = acc;
  return res;
}

std::set<RowEdge> extract_bindings(const BindingLog& log) {
  std::set<RowEdge> out;
  for (const auto& e : log.events) out.insert({e.head_row, e.dep_row, e.sg});
  return out;
}

std::set<std::pair<int, int>> bound_cells(const Architecture& arch) {
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < arch.size(); ++i)
    for (int j = 0; j < arch.size(); ++j)
      if (arch.net().e(arch.cell(i, j).lbg.wms[0].a) > arch.thresholds().sustain)
        out.insert({i, j});
  return out;
}

std::set<Edge> realized_edges(const ControlSchedule& s, const BindingLog& log) {
  std::set<Edge> out;
  for (const auto& [h, d, g] : extract_bindings(log)) {
    int hn = s.node_at_row(h), dn = s.node_at_row(d);
    if (hn < 0 || dn < 0) continue;
    out.insert({dn, hn, g});
  }
  return out;
}

StoreResult store_sentences(Architecture& arch, const std::vector<StructureSpec>& specs,
                            const LicensingTable& table, const Timing& timing,
                            const RunOptions& opt) {
  StoreResult st;
  int needed = 0;
  for (const auto& s : specs) needed += static_cast<int>(s.nodes.size());
  if (needed > arch.size())
    throw CapacityError("storing needs " + std::to_string(needed) + " rows but W" +
                        std::to_string(arch.size()) + " has " + std::to_string(arch.size()));
  for (const auto& s : specs) {
    auto sched = compile_schedule(s, table, timing, Policy::Eager, st.rows_used);
    st.runs.push_back(run_schedule(arch, sched, opt));
    st.schedules.push_back(std::move(sched));
    st.rows_used += static_cast<int>(s.nodes.size());
  }
  return st;
}

namespace {

struct StoredWord {
  int row;
  std::string token;
  LexicalType type;
};

struct QaBuilder {
  const Timing& tm;
  ControlSchedule qs;
  std::vector<std::string> steps;
  int t = 0;
  bool competition;

  QaBuilder(const Timing& t_, bool comp) : tm(t_), competition(comp) {}

  void ev(int at, const std::string& sig, int dur, double level = -1) {
    qs.events.push_back({at, sig, level < 0 ? tm.level : level, dur});
  }
  void lines(const std::vector<int>& rows, int at, int dur) {
    for (int r : rows) ev(at, "word." + std::to_string(r + 1), dur);
  }
  void reset_all() {
    for (auto ty : all_lexical_types()) ev(t, std::string("inhibit.") + type_name(ty), 30);
    t += 40;
  }
  void activate(const std::vector<int>& rows, LexicalType ty) {
    steps.push_back(std::string("activate ") + type_name(ty));
    lines(rows, t, tm.qa_step_ms);
    ev(t + 50, std::string("bind.") + type_name(ty), 50);
    t += tm.qa_step_ms + 10;
  }
  void path(LexicalType from, Side side, StructureGroup g, int dur) {
    std::string sd = side == Side::Head ? "H" : "D";
    std::string op = side == Side::Head ? "D" : "H";
    ev(t, "select." + sd + "." + type_name(from), dur);
    ev(t, "sgin." + sd + "." + sg_label(g), dur);
    ev(t, "sgout." + op + "." + sg_label(g), dur);
    ev(t + dur, "sainh." + sd + "." + sg_label(g), 20);
  }
  void hop(LexicalType from, Side side, StructureGroup g, LexicalType to,
           const std::vector<int>& extra) {
    steps.push_back(std::string(type_name(from)) + " -" + sg_label(g) + "-> " + type_name(to) +
                    (extra.empty() ? "" : " (with word cue)"));
    ev(t, std::string("inhibit.") + type_name(to), 20);
    t += 30;
    path(from, side, g, tm.qa_step_ms);
    lines(extra, t, tm.qa_step_ms);
    ev(t + tm.qa_step_ms - 100, std::string("bind.") + type_name(to), 100);
    if (competition && !extra.empty())
      ev(t + tm.qa_step_ms - 50, std::string("inhibit.") + type_name(to), 50,
         tm.qa_competition_level);
    t += tm.qa_step_ms + 30;
  }
};

}  // namespace

QuestionPlan compile_question(const StoreResult& store, const QuestionSpec& q, bool competition_on,
                              const Timing& timing) {
  if (q.tokens.size() != 3 || (q.query_slot() != 0 && q.query_slot() != 2))
    throw CompileError("unsupported question shape; use 'A V ?' or '? V B'");
  std::vector<StoredWord> words;
  for (const auto& s : store.schedules)
    for (size_t k = 0; k < s.nodes.size(); ++k)
      if (!s.nodes[k].is_virtual()) words.push_back({s.rows[k], s.nodes[k].token, s.nodes[k].type});
  auto rows_of = [&](const std::string& tok) {
    std::vector<int> r;
    for (const auto& w : words)
      if (w.token == tok) r.push_back(w.row);
    return r;
  };
  auto type_of = [&](const std::string& tok) -> std::optional<LexicalType> {
    for (const auto& w : words)
      if (w.token == tok) return w.type;
    return std::nullopt;
  };

  QuestionPlan plan;
  QaBuilder b(timing, competition_on);
  b.t = 10;
  b.reset_all();
  if (q.query_slot() == 2) {
    auto st = type_of(q.tokens[0]);
    auto vt = type_of(q.tokens[1]);
    if (!st || !vt) return plan;
    b.activate(rows_of(q.tokens[0]), *st);
    b.hop(*st, Side::Dependent, StructureGroup::Subject, LexicalType::S, {});
    b.hop(LexicalType::S, Side::Head, StructureGroup::Verb, *vt, rows_of(q.tokens[1]));
    plan.answer_from = b.t;
    b.steps.push_back(std::string(type_name(*vt)) + " -3-> ?");
    b.path(*vt, Side::Head, StructureGroup::Object, timing.qa_step_ms);
  } else {
    auto vt = type_of(q.tokens[1]);
    auto ot = type_of(q.tokens[2]);
    if (!vt || !ot) return plan;
    b.activate(rows_of(q.tokens[1]), *vt);
    b.hop(*vt, Side::Head, StructureGroup::Object, *ot, rows_of(q.tokens[2]));
    b.hop(*ot, Side::Dependent, StructureGroup::Object, *vt, rows_of(q.tokens[1]));
    b.hop(*vt, Side::Dependent, StructureGroup::Verb, LexicalType::S, {});
    plan.answer_from = b.t;
    b.steps.push_back("S -2-> ?");
    b.path(LexicalType::S, Side::Head, StructureGroup::Subject, timing.qa_step_ms);
  }
  b.t += timing.qa_step_ms + 30;
  b.qs.events.push_back({0, "retrieval", timing.level, b.t});
  b.qs.end_ms = b.t;
  std::stable_sort(b.qs.events.begin(), b.qs.events.end(),
                   [](const ControlEvent& x, const ControlEvent& y) { return x.at < y.at; });
  plan.schedule = std::move(b.qs);
  plan.steps = std::move(b.steps);
  return plan;
}

AnswerResult answer_question(Architecture& arch, const StoreResult& store, const QuestionSpec& q,
                             bool competition_on, const Timing& timing) {
  AnswerResult res;
  auto plan = compile_question(store, q, competition_on, timing);
  if (plan.answer_from < 0) {
    res.steps.push_back("no stored word matches the question");
    return res;
  }
  RunOptions opt;
  opt.record_trace = false;
  opt.word_peak_from = plan.answer_from;
  res.run = run_schedule(arch, plan.schedule, opt);
  res.steps = plan.steps;
  const double open = arch.thresholds().open;
  for (const auto& s : store.schedules)
    for (size_t k = 0; k < s.nodes.size(); ++k) {
      const auto& nd = s.nodes[k];
      if (nd.is_virtual() || res.run.word_peak[s.rows[k]] <= open) continue;
      if (std::find(q.tokens.begin(), q.tokens.end(), nd.token) != q.tokens.end()) continue;
      res.answers.insert(nd.token);
    }
  return res;
}

std::string ScenarioReport::text(const StructureSpec& spec) const {
  std::ostringstream os;
  os << name << " (" << policy_name(policy) << "): " << (pass() ? "PASS" : "FAIL") << "\n";
  for (const auto& e : realized) {
    bool want = expected.count(e) > 0;
    os << "  " << (want ? "  " : "+ ") << describe_edge(spec, e) << "\n";
  }
  for (const auto& e : expected)
    if (!realized.count(e)) os << "  - " << describe_edge(spec, e) << "\n";
  for (const auto& f : failures) os << "  ! " << f << "\n";
  return os.str();
}

ScenarioReport evaluate_scenario(const ScenarioSpec& sc, const ControlSchedule& s,
                                 const BindingLog& log) {
  ScenarioReport r;
  r.name = sc.structure.name;
  r.policy = s.policy;
  r.expected.insert(sc.structure.edges.begin(), sc.structure.edges.end());
  r.realized = realized_edges(s, log);
  std::vector<Expectation> ex = sc.expectations;
  if (ex.empty()) ex.push_back({Expectation::Exact, {}});
  for (const auto& e : ex) {
    switch (e.kind) {
      case Expectation::Exact:
        if (r.realized != r.expected) r.failures.push_back("realized structure differs from target");
        break;
      case Expectation::Incomplete:
        if (r.realized == r.expected) r.failures.push_back("target structure was fully realized");
        break;
      case Expectation::Present:
        if (!r.realized.count(e.edge))
          r.failures.push_back("missing " + describe_edge(sc.structure, e.edge));
        break;
      case Expectation::Absent:
        if (r.realized.count(e.edge))
          r.failures.push_back("unexpected " + describe_edge(sc.structure, e.edge));
        break;
    }
  }
  return r;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "upa1a", "upa1b", "upa4a", "upa4b", "gp6",      "gp14",     "upa13a",
      "upa13b", "pb1", "ae6",   "amb_ua", "amb_ap", "amb_au", "amb_gp"};
  return names;
}

ScenarioOutcome scenario_run(const std::string& name, const Config& cfg, int size,
                             std::optional<int> word_ms) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ParseError("unknown scenario '" + name + "'");
  ScenarioOutcome o;
  o.spec = load_scenario(data_dir() + "/scenarios/" + name + ".txt");
  auto table = LicensingTable::load_default();
  Timing tm = Timing::from_config(cfg);
  if (o.spec.word_ms) tm.word_ms = *o.spec.word_ms;
  if (word_ms) {
    if (*word_ms < 100) throw CompileError("word_ms must be at least 100");
    tm.word_ms = *word_ms;
    o.spec.word_ms.reset();
  }
  o.schedule = compile_schedule(o.spec, table, tm);
  Architecture arch(size, cfg);
  o.run = run_schedule(arch, o.schedule);
  o.report = evaluate_scenario(o.spec, o.schedule, o.run.log);
  return o;
}

}  // namespace hdnba
