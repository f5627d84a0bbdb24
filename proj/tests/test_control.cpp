#include "doctest.h"
#include "hdnba/control.hpp"

using namespace hdnba;
using SG = StructureGroup;

namespace {

struct Env {
  Config cfg = load_default_config();
  LicensingTable table = LicensingTable::load_default();
  Timing tm = Timing::from_config(cfg);

  StructureSpec corpus(const std::string& name) const {
    return load_structure(data_dir() + "/corpus/" + name + ".txt");
  }
  RunResult run(const StructureSpec& s, int n, ControlSchedule* out = nullptr) const {
    auto sched = compile_schedule(s, table, tm);
    Architecture arch(n, cfg);
    auto r = run_schedule(arch, sched);
    if (out) *out = sched;
    return r;
  }
};

const Env& env() {
  static const Env e;
  return e;
}

}  // namespace

TEST_CASE("Sue likes pizza binds three edges") {
  ControlSchedule s;
  auto r = env().run(env().corpus("sue_likes_pizza"), 15, &s);
  auto b = extract_bindings(r.log);
  int S = s.row_of(1), sue = s.row_of(2), likes = s.row_of(3), pizza = s.row_of(4);
  CHECK(b == std::set<RowEdge>{{S, sue, SG::Subject}, {S, likes, SG::Verb}, {likes, pizza, SG::Object}});
  CHECK(r.trace.ticks() == size_t(s.end_ms));
  CHECK(r.trace.onsets() == s.onsets);
}

TEST_CASE("single word: one LMA, no bindings") {
  auto spec = parse_structure("node 1 pizza N\n", "pizza");
  ControlSchedule s;
  Architecture arch(15, env().cfg);
  s = compile_schedule(spec, env().table, env().tm);
  auto r = run_schedule(arch, s);
  CHECK(r.log.events.empty());
  int bound = 0;
  for (auto t : all_lexical_types())
    bound += arch.net().e(arch.row(s.row_of(1)).lma[index_of(t)].wm.a) > arch.thresholds().sustain;
  CHECK(bound == 1);
}

TEST_CASE("object gap of what Max said Liz bought") {
  ControlSchedule s;
  auto spec = env().corpus("what_max_said_liz_bought");
  auto r = env().run(spec, 15, &s);
  CHECK(realized_edges(s, r.log).count(Edge{2, 7, SG::Gap}));
  bool typed = false;
  for (const auto& e : r.log.events)
    if (e.sg == SG::Gap)
      typed = e.dep_type == LexicalType::Pr && e.head_type == LexicalType::V;
  CHECK(typed);
}

TEST_CASE("word salad: no bindings, less activity") {
  auto salad = env().run(env().corpus("word_salad"), 15);
  auto phrase = env().run(env().corpus("ten_sad_students_of_bill_gates"), 15);
  CHECK(extract_bindings(salad.log).empty());
  CHECK(salad.trace.sum(Series::Total) < phrase.trace.sum(Series::Total));
}

TEST_CASE("empty schedule stays at baseline") {
  ControlSchedule s;
  s.end_ms = 300;
  Architecture arch(6, env().cfg);
  auto r = run_schedule(arch, s);
  REQUIRE(r.trace.ticks() == 300);
  CHECK(r.trace.total.front() == doctest::Approx(r.trace.total.back()).epsilon(1e-9));
  Architecture big(12, env().cfg);
  CHECK(run_schedule(big, s).trace.total.back() > r.trace.total.back());
}

TEST_CASE("category series partition the total") {
  auto r = env().run(env().corpus("ten_students"), 15);
  for (size_t k = 0; k < r.trace.ticks(); ++k)
    REQUIRE(r.trace.total[k] == r.trace.gating[k] + r.trace.wm[k] + r.trace.other[k]);
}

TEST_CASE("identical runs give identical traces") {
  auto a = env().run(env().corpus("sue_likes_pizza"), 15);
  auto b = env().run(env().corpus("sue_likes_pizza"), 15);
  CHECK(format_trace(a.trace) == format_trace(b.trace));
}

TEST_CASE("compile errors") {
  auto bad = parse_structure("node 1 _ S\nnode 2 the Det\nedge 2 1 1\n");
  CHECK_THROWS_AS(compile_schedule(bad, env().table, env().tm), CompileError);
  Timing fast = env().tm;
  fast.word_ms = 50;
  CHECK_THROWS_AS(compile_schedule(env().corpus("sue_likes_pizza"), env().table, fast),
                  CompileError);
  auto s = compile_schedule(env().corpus("miles_fallen"), env().table, env().tm);
  Architecture small(8, env().cfg);
  CHECK_THROWS_AS(run_schedule(small, s), CapacityError);
}

TEST_CASE("storing sentences") {
  const auto& e = env();
  std::vector<StructureSpec> three = {e.corpus("sue_likes_pizza"), e.corpus("sue_eats_fish"),
                                      e.corpus("bob_likes_pasta")};
  Architecture arch(15, e.cfg);
  auto st = store_sentences(arch, three, e.table, e.tm);
  CHECK(st.rows_used == 12);
  CHECK(bound_cells(arch).size() == 9);
  for (const auto& r : st.runs) CHECK(extract_bindings(r.log).size() == 3);

  Architecture twice(15, e.cfg);
  auto dup = store_sentences(twice, {e.corpus("sue_likes_pizza"), e.corpus("sue_likes_pizza")},
                             e.table, e.tm);
  auto r0 = extract_bindings(dup.runs[0].log), r1 = extract_bindings(dup.runs[1].log);
  CHECK(r0.size() == 3);
  CHECK(r1.size() == 3);
  for (const auto& x : r0) CHECK(!r1.count(x));

  auto five = parse_structure("node 1 _ S\nnode 2 a N\nnode 3 b V\nnode 4 c N\nnode 5 d N\n");
  Architecture full(15, e.cfg);
  CHECK_THROWS_AS(store_sentences(full, {five, five, five, five}, e.table, e.tm), CapacityError);
}

TEST_CASE("answering questions") {
  const auto& e = env();
  std::vector<StructureSpec> three = {e.corpus("sue_likes_pizza"), e.corpus("sue_eats_fish"),
                                      e.corpus("bob_likes_pasta")};
  auto ask = [&](const std::string& q, bool comp) {
    Architecture arch(15, e.cfg);
    auto st = store_sentences(arch, three, e.table, e.tm);
    auto before = bound_cells(arch);
    auto res = answer_question(arch, st, parse_question(q), comp, e.tm);
    CHECK(bound_cells(arch) == before);
    return res.answers;
  };
  CHECK(ask("Sue likes ?", true) == std::set<std::string>{"pizza"});
  CHECK(ask("Sue likes ?", false) == std::set<std::string>{"fish", "pasta", "pizza"});
  CHECK(ask("? likes pizza", true) == std::set<std::string>{"Sue"});
  CHECK(ask("Max hates ?", true).empty());
}
