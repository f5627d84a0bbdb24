#include "hdnba/structure.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace hdnba {

const char* policy_name(Policy p) { return p == Policy::Eager ? "eager" : "delayed"; }

std::optional<Policy> parse_policy(const std::string& s) {
  if (s == "eager") return Policy::Eager;
  if (s == "delayed") return Policy::Delayed;
  return std::nullopt;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  auto base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

struct LineReader {
  std::string where;
  std::vector<std::string> words;
  size_t pos = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where + ": " + msg); }

  std::string word() {
    if (pos >= words.size()) fail("missing field in '" + words[0] + "' line");
    return words[pos++];
  }
  int integer() {
    auto w = word();
    try {
      size_t used = 0;
      int v = std::stoi(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      fail("expected an integer, got '" + w + "'");
    }
  }
  int node_ref(bool allow_blank) {
    auto w = words.size() > pos ? words[pos] : "";
    if (allow_blank && w == "_") {
      ++pos;
      return -1;
    }
    return integer();
  }
  StructureGroup sg() {
    auto w = word();
    auto g = parse_sg(w);
    if (!g) fail("unknown structure group '" + w + "'");
    return *g;
  }
  int at() {
    auto w = word();
    if (w.size() < 2 || w[0] != '@') fail("expected @<node index>, got '" + w + "'");
    words[--pos] = w.substr(1);
    return integer();
  }
  void done() const {
    if (pos != words.size()) fail("unexpected trailing field '" + words[pos] + "'");
  }
};

ScenarioSpec parse_impl(const std::string& text, const std::string& origin, bool scenario) {
  ScenarioSpec sc;
  sc.structure.name = stem(origin);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::set<int> seen;
  // node references are checked once every node is known
  std::vector<std::tuple<int, std::string, std::string>> refs;
  auto ref = [&](const LineReader& r, int idx) { refs.emplace_back(idx, r.words[0], r.where); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    LineReader r;
    r.where = origin + ":" + std::to_string(lineno);
    std::istringstream ls(line);
    for (std::string w; ls >> w;) r.words.push_back(w);
    if (r.words.empty()) continue;
    const auto& kw = r.words[0];
    if (kw == "node") {
      Node n;
      n.index = r.integer();
      n.token = r.word();
      auto tw = r.word();
      auto t = parse_type(tw);
      if (!t) r.fail("unknown lexical type '" + tw + "'");
      n.type = *t;
      r.done();
      if (!seen.insert(n.index).second) r.fail("duplicate node index " + std::to_string(n.index));
      if (!sc.structure.nodes.empty() && n.index < sc.structure.nodes.back().index)
        r.fail("node indices must increase");
      sc.structure.nodes.push_back(n);
    } else if (kw == "edge") {
      Edge e;
      e.dep = r.integer();
      e.head = r.integer();
      e.sg = r.sg();
      r.done();
      ref(r, e.dep);
      ref(r, e.head);
      sc.structure.edges.push_back(e);
    } else if (!scenario) {
      r.fail("unknown directive '" + kw + "'");
    } else if (kw == "policy") {
      auto w = r.word();
      auto p = parse_policy(w);
      if (!p) r.fail("policy must be eager or delayed");
      sc.policy = p;
      r.done();
    } else if (kw == "word_ms") {
      sc.word_ms = r.integer();
      r.done();
    } else if (kw == "option") {
      OptionDirective o;
      o.dep = r.node_ref(true);
      o.head = r.node_ref(true);
      o.sg = r.sg();
      r.done();
      if (o.dep < 0 && o.head < 0) r.fail("option needs a dependent or a head");
      if (o.dep >= 0) ref(r, o.dep);
      if (o.head >= 0) ref(r, o.head);
      sc.options.push_back(o);
    } else if (kw == "commit" || kw == "prefer") {
      CommitDirective c;
      c.edge.dep = r.integer();
      c.edge.head = r.integer();
      c.edge.sg = r.sg();
      c.at = r.at();
      r.done();
      for (int idx : {c.edge.dep, c.edge.head, c.at}) ref(r, idx);
      (kw == "commit" ? sc.commits : sc.prefers).push_back(c);
    } else if (kw == "pause") {
      int idx = r.integer();
      int ms = r.integer();
      r.done();
      if (ms < 0) r.fail("pause must be non-negative");
      ref(r, idx);
      sc.pauses[idx] += ms;
    } else if (kw == "expect") {
      auto w = r.word();
      Expectation x;
      if (w == "exact") {
        x.kind = Expectation::Exact;
      } else if (w == "incomplete") {
        x.kind = Expectation::Incomplete;
      } else if (w == "present" || w == "absent") {
        x.kind = w == "present" ? Expectation::Present : Expectation::Absent;
        x.edge.dep = r.integer();
        x.edge.head = r.integer();
        x.edge.sg = r.sg();
      } else {
        r.fail("unknown expectation '" + w + "'");
      }
      r.done();
      sc.expectations.push_back(x);
    } else {
      r.fail("unknown directive '" + kw + "'");
    }
  }
  for (const auto& [idx, what, where] : refs)
    if (!seen.count(idx))
      throw ParseError(where + ": " + what + " refers to unknown node " + std::to_string(idx));
  return sc;
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text, const std::string& origin) {
  return parse_impl(text, origin, true);
}

ScenarioSpec load_scenario(const std::string& path) { return parse_scenario(read_file(path), path); }

StructureSpec parse_structure(const std::string& text, const std::string& origin) {
  return parse_impl(text, origin, false).structure;
}

StructureSpec load_structure(const std::string& path) {
  return parse_structure(read_file(path), path);
}

std::string format_structure(const StructureSpec& spec) {
  std::ostringstream os;
  for (const auto& n : spec.nodes)
    os << "node " << n.index << " " << n.token << " " << type_name(n.type) << "\n";
  for (const auto& e : spec.edges)
    os << "edge " << e.dep << " " << e.head << " " << sg_label(e.sg) << "\n";
  return os.str();
}

int QuestionSpec::query_slot() const {
  for (size_t k = 0; k < tokens.size(); ++k)
    if (tokens[k] == "?") return static_cast<int>(k);
  return -1;
}

QuestionSpec parse_question(const std::string& text) {
  QuestionSpec q;
  std::istringstream in(text);
  for (std::string w; in >> w;) {
    if (w.size() > 1 && w.back() == '?') {
      q.tokens.push_back(w.substr(0, w.size() - 1));
      w = "?";
    }
    q.tokens.push_back(w);
  }
  int slots = 0;
  for (const auto& t : q.tokens) slots += t == "?";
  if (slots != 1) throw ParseError("question must contain exactly one '?'");
  if (q.tokens.size() < 2) throw ParseError("question needs at least one known word");
  return q;
}

}  // namespace hdnba
