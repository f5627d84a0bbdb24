#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdnba/grammar.hpp"

namespace hdnba {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Policy { Eager, Delayed };
const char* policy_name(Policy p);
std::optional<Policy> parse_policy(const std::string& s);

// Pre-selection of an SG for a node that may or may not end up bound
// with it. A negative dep or head leaves that side unselected.
struct OptionDirective {
  int dep = -1;
  int head = -1;
  StructureGroup sg = StructureGroup::Verb;
};

// Connection of an edge deferred to (or forced at) the window of node `at`.
struct CommitDirective {
  Edge edge;
  int at = 0;
};

struct Expectation {
  enum Kind { Exact, Incomplete, Present, Absent } kind = Exact;
  Edge edge{};
};

// A structure plus parsing-control annotations.
struct ScenarioSpec {
  StructureSpec structure;
  std::optional<Policy> policy;
  std::optional<int> word_ms;
  std::vector<OptionDirective> options;
  std::vector<CommitDirective> commits;
  // Edges outside the target structure that an eager parser commits to.
  std::vector<CommitDirective> prefers;
  std::map<int, int> pauses;  // node index -> extra ms after its window
  std::vector<Expectation> expectations;
};

// Line format:
//   node <idx> <token|_> <Type>
//   edge <dep> <head> <SG>
//   # comment
// Scenario files additionally accept:
//   policy eager|delayed
//   word_ms <ms>
//   option <dep|_> <head|_> <SG>
//   commit <dep> <head> <SG> @<idx>
//   prefer <dep> <head> <SG> @<idx>
//   pause <idx> <ms>
//   expect exact|incomplete
//   expect present|absent <dep> <head> <SG>
ScenarioSpec parse_scenario(const std::string& text, const std::string& origin = "<string>");
ScenarioSpec load_scenario(const std::string& path);

// Rejects scenario-only directives.
StructureSpec parse_structure(const std::string& text, const std::string& origin = "<string>");
StructureSpec load_structure(const std::string& path);

std::string format_structure(const StructureSpec& spec);

// "Sue likes ?" style question.
struct QuestionSpec {
  std::vector<std::string> tokens;  // "?" marks the queried slot
  int query_slot() const;
};

QuestionSpec parse_question(const std::string& text);

}  // namespace hdnba
