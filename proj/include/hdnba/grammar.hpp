#pragma once

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hdnba {

enum class LexicalType : uint8_t { Adj, Adv, C, Co, Det, N, P, Pr, S, V };
constexpr int kLexicalTypeCount = 10;

// SG1..SG10 are indices 0..9, GAP is index 10.
enum class StructureGroup : uint8_t {
  Verb, Subject, Object, Det, Compl, Mod, Adjunct, PC, ExMod, Coord, Gap
};
constexpr int kStructureGroupCount = 11;

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::array<LexicalType, kLexicalTypeCount>& all_lexical_types();
const std::array<StructureGroup, kStructureGroupCount>& all_structure_groups();

const char* type_name(LexicalType t);
std::optional<LexicalType> parse_type(const std::string& s);

// "1".."10" or "GAP"
std::string sg_label(StructureGroup g);
// "SG2-Subject", "SG11-GAP"
std::string sg_long_name(StructureGroup g);
// Accepts "2", "SG2", "SG2-Subject", "GAP", "SG11-GAP".
std::optional<StructureGroup> parse_sg(const std::string& s);

inline int index_of(LexicalType t) { return static_cast<int>(t); }
inline int index_of(StructureGroup g) { return static_cast<int>(g); }

enum class GapRole { ObjectGap, SubjectGap, Scope };
const char* gap_role_name(GapRole r);
GapRole gap_interpretation(LexicalType head);
// GAP heads: V and C for any dependent; Adj and N for an Adj dependent (scope).
bool gap_allowed(LexicalType head, LexicalType dep);

struct Triple {
  LexicalType head;
  LexicalType dep;
  StructureGroup sg;
  auto operator<=>(const Triple&) const = default;
};

class LicensingTable {
 public:
  static LicensingTable load(const std::string& path);
  static LicensingTable parse(const std::string& text, const std::string& origin = "<string>");
  static LicensingTable load_default();

  bool is_licensed(LexicalType head, LexicalType dep, StructureGroup sg) const;
  std::set<StructureGroup> licensed_sgs(LexicalType head, LexicalType dep) const;

  size_t triple_count() const { return triples_.size(); }
  size_t pair_count() const;
  const std::set<Triple>& triples() const { return triples_; }
  const std::vector<std::string>& flagged() const { return flagged_; }

 private:
  std::set<Triple> triples_;
  std::vector<std::string> flagged_;
};

struct Node {
  int index = 0;
  std::string token;  // "_" for virtual nodes
  LexicalType type = LexicalType::N;
  bool is_virtual() const { return token == "_"; }
};

struct Edge {
  int dep = 0;
  int head = 0;
  StructureGroup sg = StructureGroup::Verb;
  auto operator<=>(const Edge&) const = default;
};

struct StructureSpec {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  const Node& node(int index) const;
  const Node* find(int index) const;
  int position(int index) const;
};

struct Violation {
  enum Kind { Unlicensed, MultipleDependentEdges, BadGapHead, BadNode } kind;
  std::string message;
};

std::vector<Violation> validate_structure(const StructureSpec& spec, const LicensingTable& table);

}  // namespace hdnba
