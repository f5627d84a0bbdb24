#include "hdnba/circuits.hpp"

namespace hdnba {

const char* category_name(Category c) {
  switch (c) {
    case Category::Gating: return "gating";
    case Category::WorkingMemory: return "working_memory";
    case Category::Other: return "other";
    case Category::External: return "external";
    default: return "unassigned";
  }
}

GateWeights GateWeights::from_config(const Config& cfg, const std::string& prefix) {
  return from_config(cfg, prefix, GateWeights{});
}

GateWeights GateWeights::from_config(const Config& cfg, const std::string& prefix,
                                     const GateWeights& base) {
  GateWeights w = base;
  w.x_start = cfg.get(prefix + ".x_start", w.x_start);
  w.start_inhib = cfg.get(prefix + ".start_inhib", w.start_inhib);
  w.start_gate = cfg.get(prefix + ".start_gate", w.start_gate);
  w.inhib_gate = cfg.get(prefix + ".inhib_gate", w.inhib_gate);
  w.signal_dis = cfg.get(prefix + ".signal_dis", w.signal_dis);
  w.dis_inhib = cfg.get(prefix + ".dis_inhib", w.dis_inhib);
  w.gate_y = cfg.get(prefix + ".gate_y", w.gate_y);
  return w;
}

WmWeights WmWeights::from_config(const Config& cfg, const std::string& prefix) {
  return from_config(cfg, prefix, WmWeights{});
}

WmWeights WmWeights::from_config(const Config& cfg, const std::string& prefix,
                                 const WmWeights& base) {
  WmWeights w = base;
  w.in = cfg.get(prefix + ".in", w.in);
  w.ab = cfg.get(prefix + ".ab", w.ab);
  w.ba = cfg.get(prefix + ".ba", w.ba);
  w.to_dis = cfg.get(prefix + ".to_dis", w.to_dis);
  w.reset = cfg.get(prefix + ".reset", w.reset);
  return w;
}

Thresholds Thresholds::from_config(const Config& cfg) {
  Thresholds t;
  t.open = cfg.get("open_threshold", t.open);
  t.sustain = cfg.get("sustain_threshold", t.sustain);
  return t;
}

namespace {
constexpr uint8_t kGating = static_cast<uint8_t>(Category::Gating);
constexpr uint8_t kWm = static_cast<uint8_t>(Category::WorkingMemory);
}  // namespace

SelectionGate build_selection_gate(Network& net, const GateWeights& w, PopId x, PopId y,
                                   PopId signal) {
  if (x != kNoPop) net.check(x);
  if (y != kNoPop) net.check(y);
  if (signal != kNoPop) net.check(signal);
  SelectionGate g;
  g.start = net.create_population(Sign::Excitatory, kGating);
  g.gate = net.create_population(Sign::Excitatory, kGating);
  g.inhib = net.create_population(Sign::Inhibitory, kGating);
  g.dis = net.create_population(Sign::Inhibitory, kGating);
  net.connect(g.start, g.gate, w.start_gate, Sign::Excitatory);
  net.connect(g.start, g.inhib, w.start_inhib, Sign::Excitatory);
  net.connect(g.inhib, g.gate, w.inhib_gate, Sign::Inhibitory);
  net.connect(g.dis, g.inhib, w.dis_inhib, Sign::Inhibitory);
  if (x != kNoPop) net.connect(x, g.start, w.x_start, Sign::Excitatory);
  if (y != kNoPop) net.connect(g.gate, y, w.gate_y, Sign::Excitatory);
  if (signal != kNoPop) net.connect(signal, g.dis, w.signal_dis, Sign::Excitatory);
  return g;
}

WorkingMemory build_working_memory(Network& net, const WmWeights& w, PopId x) {
  if (x != kNoPop) net.check(x);
  WorkingMemory m;
  m.a = net.create_population(Sign::Excitatory, kWm);
  m.b = net.create_population(Sign::Excitatory, kWm);
  net.connect(m.a, m.b, w.ab, Sign::Excitatory);
  net.connect(m.b, m.a, w.ba, Sign::Excitatory);
  if (x != kNoPop) net.connect(x, m.a, w.in, Sign::Excitatory);
  return m;
}

void add_wm_reset(Network& net, const WorkingMemory& wm, PopId src, double weight) {
  net.connect(src, wm.a, weight, Sign::Inhibitory);
  net.connect(src, wm.b, weight, Sign::Inhibitory);
}

BindingGate build_binding_gate(Network& net, const GateWeights& gw, const WmWeights& ww,
                               PopId x, PopId y, PopId binding_signal,
                               std::optional<WorkingMemory> wm) {
  BindingGate b;
  b.sel = build_selection_gate(net, gw, x, y, binding_signal);
  b.wm = wm ? *wm : build_working_memory(net, ww);
  net.connect(b.sel.gate, b.wm.a, ww.in, Sign::Excitatory);
  net.connect(b.wm.a, b.sel.dis, ww.to_dis, Sign::Excitatory);
  return b;
}

LinkedBindingGate build_linked_binding_gate(Network& net, const GateWeights& gw,
                                            const WmWeights& ww, PopId x1, PopId y1, PopId x2,
                                            PopId y2, PopId initiating_signal, int wm_count) {
  if (wm_count != 1 && wm_count != 2) throw GraphError("wm_count must be 1 or 2");
  LinkedBindingGate l;
  l.top = build_selection_gate(net, gw, x1, y1, initiating_signal);
  l.bottom = build_selection_gate(net, gw, x2, y2, kNoPop);
  for (int k = 0; k < wm_count; ++k) {
    auto m = build_working_memory(net, ww);
    net.connect(l.top.gate, m.a, ww.in, Sign::Excitatory);
    net.connect(l.bottom.gate, m.a, ww.in, Sign::Excitatory);
    net.connect(m.a, l.top.dis, ww.to_dis, Sign::Excitatory);
    net.connect(m.a, l.bottom.dis, ww.to_dis, Sign::Excitatory);
    l.wms.push_back(m);
  }
  return l;
}

int gating_population_count(const SelectionGate&) { return 4; }

}  // namespace hdnba
