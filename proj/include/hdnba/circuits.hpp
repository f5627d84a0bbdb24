#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdnba/config.hpp"
#include "hdnba/dynamics.hpp"

namespace hdnba {

enum class Category : uint8_t { Unassigned = 0, Gating, WorkingMemory, Other, External };

const char* category_name(Category c);

constexpr PopId kNoPop = static_cast<PopId>(-1);

struct GateWeights {
  double x_start = 0.55;
  double start_inhib = 3.0;
  double start_gate = 1.2;
  double inhib_gate = 2.5;
  double signal_dis = 1.0;
  double dis_inhib = 4.0;
  double gate_y = 1.0;

  // Reads <prefix>.x_start etc., falling back to `base` for absent keys.
  static GateWeights from_config(const Config& cfg, const std::string& prefix);
  static GateWeights from_config(const Config& cfg, const std::string& prefix,
                                 const GateWeights& base);
};

struct WmWeights {
  double in = 1.0;
  double ab = 1.0;
  double ba = 1.0;
  double to_dis = 1.0;
  double reset = 4.0;

  static WmWeights from_config(const Config& cfg, const std::string& prefix);
  static WmWeights from_config(const Config& cfg, const std::string& prefix,
                               const WmWeights& base);
};

struct Thresholds {
  double open = 25.0;
  double sustain = 10.0;
  static Thresholds from_config(const Config& cfg);
};

struct SelectionGate {
  PopId start = kNoPop;
  PopId gate = kNoPop;
  PopId inhib = kNoPop;
  PopId dis = kNoPop;
};

struct WorkingMemory {
  PopId a = kNoPop;
  PopId b = kNoPop;
};

struct BindingGate {
  SelectionGate sel;
  WorkingMemory wm;
};

struct LinkedBindingGate {
  SelectionGate top;
  SelectionGate bottom;
  std::vector<WorkingMemory> wms;
};

// X -> start, start -> gate, start -> inhib, inhib -| gate, signal -> dis,
// dis -| inhib, gate -> Y. X, Y and signal may be kNoPop and wired later.
SelectionGate build_selection_gate(Network& net, const GateWeights& w, PopId x, PopId y,
                                   PopId signal);

// A <-> B; external attachment only on A.
WorkingMemory build_working_memory(Network& net, const WmWeights& w, PopId x = kNoPop);

// Transient inhibition port on both WM sub-populations.
void add_wm_reset(Network& net, const WorkingMemory& wm, PopId src, double weight);

// Selection gate whose gate drives a WM which latches dis. If `wm` is given it
// is used as the latch instead of a fresh one.
BindingGate build_binding_gate(Network& net, const GateWeights& gw, const WmWeights& ww,
                               PopId x, PopId y, PopId binding_signal,
                               std::optional<WorkingMemory> wm = std::nullopt);

// Two binding gates in opposite directions sharing wm_count latches; every
// latch is driven by both gates and drives both dis populations. The
// initiating signal acts on the top gate.
LinkedBindingGate build_linked_binding_gate(Network& net, const GateWeights& gw,
                                            const WmWeights& ww, PopId x1, PopId y1, PopId x2,
                                            PopId y2, PopId initiating_signal, int wm_count);

int gating_population_count(const SelectionGate&);

}  // namespace hdnba
