#include "hdnba/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hdnba/config.hpp"

namespace hdnba {

namespace {

constexpr std::array<const char*, kLexicalTypeCount> kTypeNames = {
    "Adj", "Adv", "C", "Co", "Det", "N", "P", "Pr", "S", "V"};
constexpr std::array<const char*, kStructureGroupCount> kSgNames = {
    "Verb", "Subject", "Object", "Det", "Compl", "Mod", "Adjunct", "PC", "ExMod", "Coord", "GAP"};

}  // namespace

const std::array<LexicalType, kLexicalTypeCount>& all_lexical_types() {
  static const std::array<LexicalType, kLexicalTypeCount> v = [] {
    std::array<LexicalType, kLexicalTypeCount> a{};
    for (int k = 0; k < kLexicalTypeCount; ++k) a[k] = static_cast<LexicalType>(k);
    return a;
  }();
  return v;
}

const std::array<StructureGroup, kStructureGroupCount>& all_structure_groups() {
  static const std::array<StructureGroup, kStructureGroupCount> v = [] {
    std::array<StructureGroup, kStructureGroupCount> a{};
    for (int k = 0; k < kStructureGroupCount; ++k) a[k] = static_cast<StructureGroup>(k);
    return a;
  }();
  return v;
}

const char* type_name(LexicalType t) { return kTypeNames[index_of(t)]; }

std::optional<LexicalType> parse_type(const std::string& s) {
  for (int k = 0; k < kLexicalTypeCount; ++k)
    if (s == kTypeNames[k]) return static_cast<LexicalType>(k);
  return std::nullopt;
}

std::string sg_label(StructureGroup g) {
  return g == StructureGroup::Gap ? "GAP" : std::to_string(index_of(g) + 1);
}

std::string sg_long_name(StructureGroup g) {
  return "SG" + std::to_string(index_of(g) + 1) + "-" + kSgNames[index_of(g)];
}

std::optional<StructureGroup> parse_sg(const std::string& raw) {
  std::string s = raw;
  auto dash = s.find('-');
  std::string suffix;
  if (dash != std::string::npos) {
    suffix = s.substr(dash + 1);
    s = s.substr(0, dash);
  }
  if (s == "GAP") return StructureGroup::Gap;
  if (s.rfind("SG", 0) == 0) s = s.substr(2);
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) return std::nullopt;
  int k = std::stoi(s);
  if (k < 1 || k > kStructureGroupCount) return std::nullopt;
  auto g = static_cast<StructureGroup>(k - 1);
  if (!suffix.empty() && suffix != kSgNames[k - 1]) return std::nullopt;
  return g;
}

const char* gap_role_name(GapRole r) {
  switch (r) {
    case GapRole::ObjectGap: return "object-gap";
    case GapRole::SubjectGap: return "subject-gap";
    case GapRole::Scope: return "scope";
  }
  return "?";
}

bool gap_allowed(LexicalType head, LexicalType dep) {
  if (head == LexicalType::V || head == LexicalType::C) return true;
  return dep == LexicalType::Adj && (head == LexicalType::Adj || head == LexicalType::N);
}

GapRole gap_interpretation(LexicalType head) {
  if (head == LexicalType::V) return GapRole::ObjectGap;
  if (head == LexicalType::C) return GapRole::SubjectGap;
  if (head == LexicalType::Adj || head == LexicalType::N) return GapRole::Scope;
  throw GrammarError(std::string("no gap interpretation for head type ") + type_name(head));
}

LicensingTable LicensingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open licensing file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

LicensingTable LicensingTable::load_default() { return load(data_dir() + "/licensing.txt"); }

LicensingTable LicensingTable::parse(const std::string& text, const std::string& origin) {
  LicensingTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string comment;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      comment = line.substr(hash + 1);
      line = line.substr(0, hash);
    }
    std::istringstream ls(line);
    std::string h, d, g, extra;
    if (!(ls >> h)) continue;
    auto where = origin + ":" + std::to_string(lineno);
    if (!(ls >> d >> g) || (ls >> extra)) throw GrammarError(where + ": expected 'head dep sg'");
    auto ht = parse_type(h);
    auto dt = parse_type(d);
    auto sg = parse_sg(g);
    if (!ht || !dt || !sg) throw GrammarError(where + ": unknown type or structure group");
    if (*sg == StructureGroup::Gap) throw GrammarError(where + ": GAP is rule-based, not tabled");
    Triple tr{*ht, *dt, *sg};
    if (!t.triples_.insert(tr).second) throw GrammarError(where + ": duplicate triple");
    if (comment.find("flagged") != std::string::npos)
      t.flagged_.push_back(h + " " + d + " " + g);
  }
  return t;
}

bool LicensingTable::is_licensed(LexicalType head, LexicalType dep, StructureGroup sg) const {
  if (sg == StructureGroup::Gap) return gap_allowed(head, dep);
  return triples_.count({head, dep, sg}) > 0;
}

std::set<StructureGroup> LicensingTable::licensed_sgs(LexicalType head, LexicalType dep) const {
  std::set<StructureGroup> out;
  for (auto g : all_structure_groups())
    if (g != StructureGroup::Gap && triples_.count({head, dep, g})) out.insert(g);
  return out;
}

size_t LicensingTable::pair_count() const {
  std::set<std::pair<LexicalType, LexicalType>> pairs;
  for (const auto& t : triples_) pairs.insert({t.head, t.dep});
  return pairs.size();
}

const Node* StructureSpec::find(int index) const {
  for (const auto& n : nodes)
    if (n.index == index) return &n;
  return nullptr;
}

const Node& StructureSpec::node(int index) const {
  auto* n = find(index);
  if (!n) throw GrammarError("no node with index " + std::to_string(index));
  return *n;
}

int StructureSpec::position(int index) const {
  for (size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].index == index) return static_cast<int>(k);
  throw GrammarError("no node with index " + std::to_string(index));
}

std::vector<Violation> validate_structure(const StructureSpec& spec, const LicensingTable& table) {
  std::vector<Violation> out;
  for (size_t k = 1; k < spec.nodes.size(); ++k)
    if (spec.nodes[k].index <= spec.nodes[k - 1].index)
      out.push_back({Violation::BadNode, "node indices must be unique and increasing"});
  std::map<int, int> non_gap;
  for (const auto& e : spec.edges) {
    auto* d = spec.find(e.dep);
    auto* h = spec.find(e.head);
    std::string tag = std::to_string(e.dep) + " -" + sg_label(e.sg) + "-> " + std::to_string(e.head);
    if (!d || !h) {
      out.push_back({Violation::BadNode, "edge " + tag + " names an unknown node"});
      continue;
    }
    if (e.dep == e.head) {
      out.push_back({Violation::BadNode, "edge " + tag + " is a self-edge"});
      continue;
    }
    if (e.sg == StructureGroup::Gap) {
      if (!gap_allowed(h->type, d->type))
        out.push_back({Violation::BadGapHead, "GAP edge " + tag + " has head type " +
                                                  type_name(h->type) + " for a " +
                                                  type_name(d->type) + " dependent"});
      continue;
    }
    if (!table.is_licensed(h->type, d->type, e.sg))
      out.push_back({Violation::Unlicensed, "unlicensed edge " + tag + " (" + type_name(h->type) +
                                                " head, " + type_name(d->type) + " dependent, " +
                                                sg_long_name(e.sg) + ")"});
    if (++non_gap[e.dep] == 2)
      out.push_back({Violation::MultipleDependentEdges,
                     "node " + std::to_string(e.dep) + " has more than one non-GAP head"});
  }
  return out;
}

}  // namespace hdnba
