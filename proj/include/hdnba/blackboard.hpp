#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hdnba/circuits.hpp"
#include "hdnba/config.hpp"
#include "hdnba/dynamics.hpp"
#include "hdnba/grammar.hpp"

namespace hdnba {

enum class Side : uint8_t { Head = 0, Dependent = 1 };
inline int index_of(Side s) { return static_cast<int>(s); }
const char* side_name(Side s);

class ArchitectureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SgBundle {
  // top: LMA hub -> SA, bottom: sg_out gate -> word population
  LinkedBindingGate lbg;
  WorkingMemory sa;
  SelectionGate sg_in_gate;
  SelectionGate sg_out_gate;
  PopId sg_in = kNoPop;
  PopId sg_comp = kNoPop;
  PopId sg_inhib = kNoPop;
  PopId sg_comp_inh = kNoPop;
  PopId sa_inh = kNoPop;
  bool has_block = false;  // dependent rows, non-GAP only
  WorkingMemory sa_wm;
  PopId sg_block = kNoPop;
};

struct RowSide {
  std::array<SelectionGate, kLexicalTypeCount> lma_sel;
  PopId hub = kNoPop;
  PopId cm_in = kNoPop;
  PopId cm_out = kNoPop;
  std::array<SgBundle, kStructureGroupCount> sg;
};

struct WordRow {
  PopId word = kNoPop;
  std::array<BindingGate, kLexicalTypeCount> lma;  // lma[t].wm is the LMA itself
  std::array<PopId, kLexicalTypeCount> lma_reset{};
  std::array<RowSide, 2> side;
};

struct Cell {
  LinkedBindingGate lbg;  // top: head cm_in -> dependent cm_out
};

struct SignalRegistry {
  std::vector<PopId> word_line;
  std::array<PopId, kLexicalTypeCount> lma_bind{};
  std::array<PopId, kLexicalTypeCount> lma_inhibit{};
  std::array<std::array<PopId, kLexicalTypeCount>, 2> lma_select{};
  std::array<std::array<PopId, kStructureGroupCount>, 2> sg_bind{};
  std::array<std::array<PopId, kStructureGroupCount>, 2> sg_in{};
  std::array<std::array<PopId, kStructureGroupCount>, 2> sg_out{};
  std::array<std::array<PopId, kStructureGroupCount>, 2> sa_inhibit{};
  PopId retrieval = kNoPop;

  std::vector<PopId> all() const;
  std::string name_of(PopId p) const;
  PopId find(const std::string& name) const;
};

struct Census {
  long gating = 0;
  long working_memory = 0;
  long other = 0;
  long blackboard_total = 0;
  long external = 0;
  long simulation_total = 0;
  long wilson_cowan_units = 0;
  bool operator==(const Census&) const = default;
};

Census census_formula(long n);
std::string format_census(long n, const Census& c);

struct RosterItem {
  std::string name;
  int count;
};
// Manifest of "other" populations per word pair.
std::vector<RosterItem> load_other_roster(const std::string& path);

struct CircuitWeights {
  GateWeights gate;
  GateWeights lma_gate;
  WmWeights wm;
  WmWeights lma_wm;
  double word_line = 0.5;
  double word_path = 0.5;
  double hub_start = 0.55;
  double sa_from_gate = 0.45;
  double sa_from_signal = 0.3;
  double sgin_from_sa = 0.55;
  double sgin_from_gate = 0.55;
  double sgin_to_cm = 1.0;
  double comp_kick = 2.0;
  double comp_sa = 0.8;
  double comp_in = 0.8;
  double comp_to_inhib = 1.0;
  double comp_cross = 2.0;
  double comp_block = 4.0;
  double sainh_signal = 0.3;
  double sainh_comp = 0.3;
  double sainh_weight = 4.0;
  double sawm_in = 1.0;
  double block_in = 1.0;
  double block_weight = 4.0;
  double lma_reset_in = 1.0;

  static CircuitWeights from_config(const Config& cfg);
};

class Architecture {
 public:
  Architecture(int n, const Config& cfg);

  int size() const { return n_; }
  Network& net() { return net_; }
  const Network& net() const { return net_; }
  const Config& config() const { return cfg_; }
  const CircuitWeights& weights() const { return w_; }
  const Thresholds& thresholds() const { return thr_; }

  const WordRow& row(int k) const { return rows_.at(k); }
  const Cell& cell(int head_row, int dep_row) const;
  const SignalRegistry& signals() const { return sig_; }

  Category population_category(PopId p) const;
  Census census() const;

  // Row (0-based) or -1 for cells and external populations.
  int owner_row(PopId p) const { return owner_[p]; }
  // Cell index head*n + dep, or -1.
  int owner_cell(PopId p) const { return owner_cell_[p]; }

  // Violations of the wiring invariants; empty when the graph is sound.
  std::vector<std::string> audit() const;

  // Summed rate per category for the current state.
  void category_sums(double& gating, double& wm, double& other) const;

  // Populations whose category counts toward blackboard sums (not external).
  const std::vector<PopId>& blackboard_pops() const { return blackboard_; }

 private:
  void build_rows();
  void build_cells();
  void build_competition();
  PopId other_pop(Sign s);
  void claim(PopId first, int row, int cell);

  int n_;
  Config cfg_;
  CircuitWeights w_;
  Thresholds thr_;
  Network net_;
  std::vector<WordRow> rows_;
  std::vector<Cell> cells_;
  SignalRegistry sig_;
  std::vector<int32_t> owner_, owner_cell_;
  std::vector<PopId> blackboard_;
};

std::unique_ptr<Architecture> build_architecture(int n, const Config& cfg);

struct CellSignature {
  double wm = 0, start = 0, dis = 0, inhib = 0, gate = 0;
};

}  // namespace hdnba
