#include "hdnba/blackboard.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hdnba {

const char* side_name(Side s) { return s == Side::Head ? "H" : "D"; }

namespace {

constexpr uint8_t kOther = static_cast<uint8_t>(Category::Other);
constexpr uint8_t kExternal = static_cast<uint8_t>(Category::External);
constexpr int kGap = static_cast<int>(StructureGroup::Gap);

}  // namespace

CircuitWeights CircuitWeights::from_config(const Config& cfg) {
  CircuitWeights w;
  w.gate = GateWeights::from_config(cfg, "gate");
  w.lma_gate = GateWeights::from_config(cfg, "lmagate", w.gate);
  w.wm = WmWeights::from_config(cfg, "wm");
  w.lma_wm = WmWeights::from_config(cfg, "lmawm", w.wm);
  auto rd = [&](const char* key, double& v) { v = cfg.get(key, v); };
  rd("word.line", w.word_line);
  rd("word.path", w.word_path);
  rd("hub.start", w.hub_start);
  rd("sa.from_gate", w.sa_from_gate);
  rd("sa.from_signal", w.sa_from_signal);
  rd("sgin.from_sa", w.sgin_from_sa);
  rd("sgin.from_gate", w.sgin_from_gate);
  rd("sgin.to_cm", w.sgin_to_cm);
  rd("comp.kick", w.comp_kick);
  rd("comp.sa", w.comp_sa);
  rd("comp.in", w.comp_in);
  rd("comp.to_inhib", w.comp_to_inhib);
  rd("comp.cross", w.comp_cross);
  rd("comp.block", w.comp_block);
  rd("sainh.signal", w.sainh_signal);
  rd("sainh.comp", w.sainh_comp);
  rd("sainh.weight", w.sainh_weight);
  rd("sawm.in", w.sawm_in);
  rd("block.in", w.block_in);
  rd("block.weight", w.block_weight);
  rd("lma.reset_in", w.lma_reset_in);
  return w;
}

Census census_formula(long n) {
  Census c;
  c.gating = 8 * n * n + 472 * n;
  c.working_memory = 2 * n * n + 172 * n;
  c.other = 137 * n;
  c.blackboard_total = c.gating + c.working_memory + c.other;
  c.external = n + 129;
  c.simulation_total = c.blackboard_total + c.external;
  c.wilson_cowan_units = 2 * c.simulation_total;
  return c;
}

std::string format_census(long n, const Census& c) {
  std::ostringstream os;
  os << "size            W" << n << "\n"
     << "gating          " << c.gating << "\n"
     << "working_memory  " << c.working_memory << "\n"
     << "other           " << c.other << "\n"
     << "blackboard      " << c.blackboard_total << "\n"
     << "external        " << c.external << "\n"
     << "simulation      " << c.simulation_total << "\n"
     << "wilson_cowan    " << c.wilson_cowan_units << "\n";
  return os.str();
}

std::vector<RosterItem> load_other_roster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArchitectureError("cannot open roster: " + path);
  std::vector<RosterItem> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    RosterItem it;
    if (ls >> it.name >> it.count) out.push_back(it);
  }
  return out;
}

std::vector<PopId> SignalRegistry::all() const {
  std::vector<PopId> v(word_line);
  for (int t = 0; t < kLexicalTypeCount; ++t) {
    v.push_back(lma_bind[t]);
    v.push_back(lma_inhibit[t]);
    v.push_back(lma_select[0][t]);
    v.push_back(lma_select[1][t]);
  }
  for (int s = 0; s < 2; ++s)
    for (int g = 0; g < kStructureGroupCount; ++g) {
      v.push_back(sg_bind[s][g]);
      v.push_back(sg_in[s][g]);
      v.push_back(sg_out[s][g]);
      v.push_back(sa_inhibit[s][g]);
    }
  v.push_back(retrieval);
  return v;
}

std::string SignalRegistry::name_of(PopId p) const {
  for (size_t k = 0; k < word_line.size(); ++k)
    if (word_line[k] == p) return "word." + std::to_string(k + 1);
  const auto& types = all_lexical_types();
  for (int t = 0; t < kLexicalTypeCount; ++t) {
    std::string tn = type_name(types[t]);
    if (lma_bind[t] == p) return "bind." + tn;
    if (lma_inhibit[t] == p) return "inhibit." + tn;
    if (lma_select[0][t] == p) return "select.H." + tn;
    if (lma_select[1][t] == p) return "select.D." + tn;
  }
  for (int s = 0; s < 2; ++s)
    for (int g = 0; g < kStructureGroupCount; ++g) {
      std::string suffix = std::string(s == 0 ? "H" : "D") + "." +
                           sg_label(static_cast<StructureGroup>(g));
      if (sg_bind[s][g] == p) return "sgbind." + suffix;
      if (sg_in[s][g] == p) return "sgin." + suffix;
      if (sg_out[s][g] == p) return "sgout." + suffix;
      if (sa_inhibit[s][g] == p) return "sainh." + suffix;
    }
  if (retrieval == p) return "retrieval";
  return "";
}

PopId SignalRegistry::find(const std::string& name) const {
  for (auto p : all())
    if (name_of(p) == name) return p;
  return kNoPop;
}

Architecture::Architecture(int n, const Config& cfg)
    : n_(n),
      cfg_(cfg),
      w_(CircuitWeights::from_config(cfg)),
      thr_(Thresholds::from_config(cfg)),
      net_(PopulationParams::from_config(cfg)) {
  if (n < 2) throw ArchitectureError("architecture size must be at least 2");

  sig_.word_line.resize(n);
  for (auto& p : sig_.word_line) p = net_.create_population(Sign::Excitatory, kExternal);
  auto ext = [&] { return net_.create_population(Sign::Excitatory, kExternal); };
  for (int t = 0; t < kLexicalTypeCount; ++t) {
    sig_.lma_bind[t] = ext();
    sig_.lma_inhibit[t] = ext();
    sig_.lma_select[0][t] = ext();
    sig_.lma_select[1][t] = ext();
  }
  for (int s = 0; s < 2; ++s)
    for (int g = 0; g < kStructureGroupCount; ++g) {
      sig_.sg_bind[s][g] = ext();
      sig_.sg_in[s][g] = ext();
      sig_.sg_out[s][g] = ext();
      sig_.sa_inhibit[s][g] = ext();
    }
  sig_.retrieval = ext();
  owner_.assign(net_.size(), -1);
  owner_cell_.assign(net_.size(), -1);

  build_rows();
  build_cells();
  build_competition();

  for (PopId p = 0; p < net_.size(); ++p)
    if (net_.tag(p) != kExternal) blackboard_.push_back(p);
  net_.settle();
}

void Architecture::claim(PopId first, int row, int cell) {
  owner_.resize(net_.size(), row);
  owner_cell_.resize(net_.size(), cell);
  for (PopId p = first; p < net_.size(); ++p) {
    owner_[p] = row;
    owner_cell_[p] = cell;
  }
}

PopId Architecture::other_pop(Sign s) { return net_.create_population(s, kOther); }

void Architecture::build_rows() {
  rows_.resize(n_);
  for (int k = 0; k < n_; ++k) {
    PopId first = static_cast<PopId>(net_.size());
    WordRow& r = rows_[k];
    r.word = other_pop(Sign::Excitatory);
    net_.connect(sig_.word_line[k], r.word, w_.word_line, Sign::Excitatory);
    for (int t = 0; t < kLexicalTypeCount; ++t) {
      r.lma[t] = build_binding_gate(net_, w_.lma_gate, w_.lma_wm, r.word, kNoPop,
                                    sig_.lma_bind[t]);
      r.lma_reset[t] = other_pop(Sign::Inhibitory);
      net_.connect(sig_.lma_inhibit[t], r.lma_reset[t], w_.lma_reset_in, Sign::Excitatory);
      add_wm_reset(net_, r.lma[t].wm, r.lma_reset[t], w_.lma_wm.reset);
    }
    for (int s = 0; s < 2; ++s) {
      RowSide& rs = r.side[s];
      rs.hub = other_pop(Sign::Excitatory);
      rs.cm_in = other_pop(Sign::Excitatory);
      rs.cm_out = other_pop(Sign::Excitatory);
      for (int t = 0; t < kLexicalTypeCount; ++t)
        rs.lma_sel[t] =
            build_selection_gate(net_, w_.gate, r.lma[t].wm.a, rs.hub, sig_.lma_select[s][t]);
      for (int g = 0; g < kStructureGroupCount; ++g) {
        SgBundle& b = rs.sg[g];
        b.sa = build_working_memory(net_, w_.wm);
        b.sg_out_gate = build_selection_gate(net_, w_.gate, rs.cm_out, kNoPop, sig_.sg_out[s][g]);
        b.lbg = build_linked_binding_gate(net_, w_.gate, w_.wm, rs.hub, kNoPop,
                                          b.sg_out_gate.gate, kNoPop, sig_.sg_bind[s][g], 2);
        net_.connect(b.lbg.bottom.gate, r.word, w_.word_path, Sign::Excitatory);
        b.sg_in = other_pop(Sign::Excitatory);
        b.sg_in_gate = build_selection_gate(net_, w_.gate, kNoPop, b.sg_in, sig_.sg_in[s][g]);
        net_.connect(b.sa.a, b.sg_in_gate.start, w_.sgin_from_sa, Sign::Excitatory);
        net_.connect(b.lbg.top.gate, b.sg_in_gate.start, w_.sgin_from_gate, Sign::Excitatory);
        net_.connect(b.lbg.top.gate, b.sa.a, w_.sa_from_gate, Sign::Excitatory);
        net_.connect(sig_.sg_bind[s][g], b.sa.a, w_.sa_from_signal, Sign::Excitatory);
        net_.connect(b.sg_in, rs.cm_in, w_.sgin_to_cm, Sign::Excitatory);

        b.sg_comp = other_pop(Sign::Excitatory);
        b.sg_inhib = other_pop(Sign::Inhibitory);
        b.sg_comp_inh = other_pop(Sign::Inhibitory);
        b.sa_inh = other_pop(Sign::Inhibitory);
        net_.connect(b.lbg.top.gate, b.sg_comp, w_.comp_kick, Sign::Excitatory);
        net_.connect(b.sa.a, b.sg_comp, w_.comp_sa, Sign::Excitatory);
        net_.connect(b.sg_in, b.sg_comp, w_.comp_in, Sign::Excitatory);
        net_.connect(b.sg_comp, b.sg_inhib, w_.comp_to_inhib, Sign::Excitatory);
        net_.connect(sig_.retrieval, b.sg_comp_inh, 1.0, Sign::Excitatory);
        net_.connect(b.sg_comp_inh, b.sg_comp, w_.comp_block, Sign::Inhibitory);
        net_.connect(sig_.sa_inhibit[s][g], b.sa_inh, w_.sainh_signal, Sign::Excitatory);
        net_.connect(b.sg_comp, b.sa_inh, w_.sainh_comp, Sign::Excitatory);
        add_wm_reset(net_, b.sa, b.sa_inh, w_.sainh_weight);

        if (s == index_of(Side::Dependent) && g != kGap) {
          b.has_block = true;
          b.sa_wm = build_working_memory(net_, w_.wm, b.sg_in);
          b.sg_block = other_pop(Sign::Inhibitory);
          net_.connect(b.sa_wm.a, b.sg_block, w_.block_in, Sign::Excitatory);
        }
      }
    }
    // Same-row blocking of the other non-GAP bundles.
    RowSide& dep = r.side[index_of(Side::Dependent)];
    for (int g = 0; g < kStructureGroupCount; ++g) {
      if (!dep.sg[g].has_block) continue;
      for (int h = 0; h < kStructureGroupCount; ++h) {
        if (h == g || h == kGap) continue;
        add_wm_reset(net_, dep.sg[h].sa, dep.sg[g].sg_block, w_.block_weight);
        for (const auto& m : dep.sg[h].lbg.wms) add_wm_reset(net_, m, dep.sg[g].sg_block, w_.block_weight);
      }
    }
    claim(first, k, -1);
  }
}

void Architecture::build_cells() {
  cells_.resize(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      PopId first = static_cast<PopId>(net_.size());
      const RowSide& h = rows_[i].side[index_of(Side::Head)];
      const RowSide& d = rows_[j].side[index_of(Side::Dependent)];
      cells_[i * n_ + j].lbg =
          build_linked_binding_gate(net_, w_.gate, w_.wm, h.cm_in, d.cm_out, d.cm_in, h.cm_out,
                                    d.cm_in, 1);
      claim(first, -1, i * n_ + j);
    }
}

void Architecture::build_competition() {
  for (int s = 0; s < 2; ++s)
    for (int g = 0; g < kStructureGroupCount; ++g)
      for (int k = 0; k < n_; ++k)
        for (int j = 0; j < n_; ++j) {
          if (j == k) continue;
          const SgBundle& src = rows_[k].side[s].sg[g];
          const SgBundle& dst = rows_[j].side[s].sg[g];
          net_.connect(src.sg_inhib, dst.sg_in, w_.comp_cross, Sign::Inhibitory);
          net_.connect(src.sg_inhib, dst.sg_comp, w_.comp_cross, Sign::Inhibitory);
        }
}

const Cell& Architecture::cell(int head_row, int dep_row) const {
  if (head_row < 0 || dep_row < 0 || head_row >= n_ || dep_row >= n_)
    throw ArchitectureError("cell index out of range");
  return cells_[static_cast<size_t>(head_row) * n_ + dep_row];
}

Category Architecture::population_category(PopId p) const {
  net_.check(p);
  return static_cast<Category>(net_.tag(p));
}

Census Architecture::census() const {
  Census c;
  for (PopId p = 0; p < net_.size(); ++p) {
    switch (population_category(p)) {
      case Category::Gating: ++c.gating; break;
      case Category::WorkingMemory: ++c.working_memory; break;
      case Category::Other: ++c.other; break;
      case Category::External: ++c.external; break;
      default: throw ArchitectureError("population without category: " + std::to_string(p));
    }
  }
  c.blackboard_total = c.gating + c.working_memory + c.other;
  c.simulation_total = c.blackboard_total + c.external;
  c.wilson_cowan_units = 2 * c.simulation_total;
  return c;
}

void Architecture::category_sums(double& gating, double& wm, double& other) const {
  gating = wm = other = 0;
  for (PopId p : blackboard_) {
    double v = net_.output(p);
    switch (static_cast<Category>(net_.tag(p))) {
      case Category::Gating: gating += v; break;
      case Category::WorkingMemory: wm += v; break;
      default: other += v; break;
    }
  }
}

std::vector<std::string> Architecture::audit() const {
  std::vector<std::string> out;
  // roster
  auto roster = load_other_roster(data_dir() + "/other_roster.txt");
  long roster_total = 0;
  for (const auto& it : roster) roster_total += it.count;
  auto c = census();
  if (roster_total * n_ != c.other)
    out.push_back("other populations " + std::to_string(c.other) + " do not match roster " +
                  std::to_string(roster_total) + " per word pair");
  if (cells_.size() != static_cast<size_t>(n_) * n_) out.push_back("cell count mismatch");

  // fan-out of control signals
  std::map<PopId, std::set<int>> reach;
  std::map<PopId, std::set<int>> reach_cells;
  for (const auto& l : net_.links()) {
    if (net_.tag(l.src) != kExternal) {
      if (net_.tag(l.dst) == kExternal) out.push_back("link into external population");
      continue;
    }
    if (owner_[l.dst] >= 0) reach[l.src].insert(owner_[l.dst]);
    if (owner_cell_[l.dst] >= 0) reach_cells[l.src].insert(owner_cell_[l.dst]);
  }
  for (int k = 0; k < n_; ++k)
    if (reach[sig_.word_line[k]] != std::set<int>{k})
      out.push_back("word line " + std::to_string(k + 1) + " must drive only its own row");
  std::set<PopId> lines(sig_.word_line.begin(), sig_.word_line.end());
  for (auto p : sig_.all()) {
    if (lines.count(p)) continue;
    if (static_cast<int>(reach[p].size()) != n_ || !reach_cells[p].empty())
      out.push_back("signal " + sig_.name_of(p) + " does not fan out to all rows");
  }

  // inhibition locality
  std::map<PopId, std::pair<int, int>> bundle_of;  // sg_inhib -> (side, sg)
  std::map<PopId, std::pair<int, int>> target_of;  // sg_in/sg_comp -> (side, sg)
  std::set<PopId> blocks;
  for (int k = 0; k < n_; ++k)
    for (int s = 0; s < 2; ++s)
      for (int g = 0; g < kStructureGroupCount; ++g) {
        const auto& b = rows_[k].side[s].sg[g];
        bundle_of[b.sg_inhib] = {s, g};
        target_of[b.sg_in] = {s, g};
        target_of[b.sg_comp] = {s, g};
        if (b.has_block) blocks.insert(b.sg_block);
      }
  std::set<PopId> gap_targets;
  for (int k = 0; k < n_; ++k) {
    const auto& b = rows_[k].side[index_of(Side::Dependent)].sg[kGap];
    for (auto p : {b.sa.a, b.sa.b}) gap_targets.insert(p);
    for (const auto& m : b.lbg.wms)
      for (auto p : {m.a, m.b}) gap_targets.insert(p);
  }
  for (int k = 0; k < n_; ++k)
    if (rows_[k].side[index_of(Side::Head)].sg[0].has_block)
      out.push_back("head row " + std::to_string(k + 1) + " has a block population");
  for (const auto& l : net_.links()) {
    if (l.sign != Sign::Inhibitory) continue;
    if (net_.output_sign(l.src) != Sign::Inhibitory)
      out.push_back("inhibitory link from an excitatory population");
    bool same_cell = owner_cell_[l.src] >= 0 && owner_cell_[l.src] == owner_cell_[l.dst];
    bool same_row = owner_[l.src] >= 0 && owner_[l.src] == owner_[l.dst];
    if (blocks.count(l.src) && gap_targets.count(l.dst))
      out.push_back("block population targets a GAP bundle");
    if (same_cell || same_row) {
      if (bundle_of.count(l.src) && target_of.count(l.dst))
        out.push_back("competition link within one row");
      continue;
    }
    auto src = bundle_of.find(l.src);
    auto dst = target_of.find(l.dst);
    if (src == bundle_of.end() || dst == target_of.end() || src->second != dst->second)
      out.push_back("non-local inhibitory link " + std::to_string(l.src) + " -> " +
                    std::to_string(l.dst));
  }
  return out;
}

std::unique_ptr<Architecture> build_architecture(int n, const Config& cfg) {
  return std::make_unique<Architecture>(n, cfg);
}

}  // namespace hdnba
