#include "doctest.h"
#include "hdnba/circuits.hpp"

using namespace hdnba;

namespace {

struct Fixture {
  Config cfg = load_default_config();
  PopulationParams pp = PopulationParams::from_config(cfg);
  GateWeights gw = GateWeights::from_config(cfg, "gate");
  WmWeights ww = WmWeights::from_config(cfg, "wm");
  Thresholds thr = Thresholds::from_config(cfg);
};

void run(Network& net, int ticks) {
  for (int t = 0; t < ticks; ++t) net.step();
}

double peak(Network& net, PopId p, int ticks) {
  double m = 0;
  for (int t = 0; t < ticks; ++t) {
    net.step();
    m = std::max(m, net.output(p));
  }
  return m;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "selection gate") {
  Network net(pp);
  auto x = net.create_population();
  auto y = net.create_population();
  auto sig = net.create_population();
  auto g = build_selection_gate(net, gw, x, y, sig);
  CHECK(gating_population_count(g) == 4);

  SUBCASE("signal without X keeps Y at baseline") {
    net.set_input(sig, 100);
    CHECK(peak(net, y, 500) <= 2 * net.baseline(y));
  }
  SUBCASE("closed under 1000 ms drive, opens under signal, recloses") {
    net.set_input(x, 100);
    double onset = 0, late = 0, leak = 0;
    for (int t = 0; t < 1000; ++t) {
      net.step();
      (t < 20 ? onset : late) = std::max(t < 20 ? onset : late, net.output(g.gate));
      leak = std::max(leak, net.e(y));
    }
    // gate itself twitches at drive onset, before inhibition catches up
    CHECK(onset < 0.1 * thr.sustain);
    CHECK(late <= 2 * net.baseline(g.gate));
    CHECK(leak <= 2 * net.baseline(y));
    net.set_input(sig, 100);
    CHECK(peak(net, g.gate, 100) > thr.open);
    CHECK(net.e(y) > thr.open);
    net.set_input(sig, 0);
    run(net, 200);
    CHECK(net.output(g.gate) <= 2 * net.baseline(g.gate));
  }
}

TEST_CASE_FIXTURE(Fixture, "working memory") {
  Network net(pp);
  auto x = net.create_population();
  auto wm = build_working_memory(net, ww, x);

  SUBCASE("no input stays at baseline") {
    run(net, 1000);
    CHECK(net.e(wm.a) <= 2 * net.baseline(wm.a));
  }
  SUBCASE("sustains after 400 ms input, then resets") {
    net.set_input(x, 100);
    run(net, 400);
    double during = net.e(wm.a);
    net.set_input(x, 0);
    double lo = 100;
    for (int t = 0; t < 2000; ++t) {
      net.step();
      lo = std::min(lo, net.e(wm.a));
    }
    CHECK(lo > thr.sustain);
    CHECK(lo <= during);

    auto inh = net.create_population(Sign::Inhibitory);
    add_wm_reset(net, wm, inh, ww.reset);
    net.set_input(inh, 100);
    run(net, 50);
    net.set_input(inh, 0);
    run(net, 500);
    CHECK(net.e(wm.a) <= 2 * net.baseline(wm.a));
    CHECK(net.e(wm.b) <= 2 * net.baseline(wm.b));
  }
}

TEST_CASE_FIXTURE(Fixture, "binding gate") {
  Network net(pp);
  auto x = net.create_population();
  auto y = net.create_population();
  auto sig = net.create_population();
  auto bg = build_binding_gate(net, gw, ww, x, y, sig);

  SUBCASE("never opens without a binding signal") {
    net.set_input(x, 100);
    CHECK(peak(net, y, 1500) < thr.open);
  }
  SUBCASE("one transient signal binds; inhibiting the memory releases") {
    net.set_input(x, 100);
    run(net, 100);
    net.set_input(sig, 100);
    run(net, 50);
    net.set_input(sig, 0);
    net.set_input(x, 0);
    run(net, 1000);
    CHECK(net.e(bg.wm.a) > thr.sustain);
    net.set_input(x, 100);
    CHECK(peak(net, y, 200) > thr.open);

    net.set_input(x, 0);
    auto inh = net.create_population(Sign::Inhibitory);
    add_wm_reset(net, bg.wm, inh, ww.reset);
    net.set_input(inh, 100);
    run(net, 50);
    net.set_input(inh, 0);
    run(net, 300);
    net.set_input(x, 100);
    CHECK(peak(net, y, 300) < thr.open);
  }
}

TEST_CASE_FIXTURE(Fixture, "linked binding gate") {
  Network net(pp);
  auto x1 = net.create_population();
  auto y1 = net.create_population();
  auto x2 = net.create_population();
  auto y2 = net.create_population();
  auto sig = net.create_population();
  size_t before = net.size();
  auto l = build_linked_binding_gate(net, gw, ww, x1, y1, x2, y2, sig, 1);
  size_t one = net.size() - before;

  SUBCASE("never initiated: both directions closed") {
    net.set_input(x1, 100);
    net.set_input(x2, 100);
    CHECK(peak(net, y1, 800) < thr.open);
    CHECK(peak(net, y2, 1) < thr.open);
  }
  SUBCASE("initiated: activation flows both ways, directions agree") {
    net.set_input(x1, 100);
    net.set_input(sig, 100);
    run(net, 60);
    net.set_input(sig, 0);
    net.set_input(x1, 0);
    run(net, 500);
    net.set_input(x1, 100);
    net.set_input(x2, 100);
    run(net, 50);
    int disagree = 0;
    for (int t = 0; t < 300; ++t) {
      net.step();
      bool a = net.output(l.top.gate) > thr.open, b = net.output(l.bottom.gate) > thr.open;
      disagree += a != b;
    }
    CHECK(disagree == 0);
    CHECK(net.e(y1) > thr.open);
    CHECK(net.e(y2) > thr.open);
  }
  SUBCASE("two latches cost exactly two populations more") {
    Network other(pp);
    std::vector<PopId> io;
    for (int k = 0; k < 5; ++k) io.push_back(other.create_population());
    size_t b2 = other.size();
    build_linked_binding_gate(other, gw, ww, io[0], io[1], io[2], io[3], io[4], 2);
    CHECK(other.size() - b2 == one + 2);
    CHECK_THROWS_AS(build_linked_binding_gate(other, gw, ww, io[0], io[1], io[2], io[3], io[4], 3),
                    GraphError);
  }
}
