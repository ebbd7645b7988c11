#include <catch2/catch_amalgamated.hpp>

#include <adhoclab/sim/dymo.hpp>

#include <cstdio>
#include <fstream>
#include <vector>

#include "sim_driver.hpp"

using namespace adhoclab;
using namespace adhoclab::sim;
using adhoclab::test::bench_cfg;
using adhoclab::test::make_bench;

TEST_CASE("the ring ladder climbs odd widths to the diameter then repeats it") {
  auto def = Dymo::ers_ladder(make_profile(Protocol::dymo, Variant::def));
  REQUIRE(def == std::vector<int>({1, 3, 5, 7, 9, 10, 10, 10}));

  auto mod = Dymo::ers_ladder(make_profile(Protocol::dymo, Variant::mod));
  REQUIRE(mod.size() == 18);
  REQUIRE(mod.front() == 1);
  REQUIRE(mod[14] == 29);
  REQUIRE(mod[15] == 30);
  REQUIRE(mod.back() == 30);
  REQUIRE(make_profile(Protocol::dymo, Variant::mod).rreq_wait_time == 0.6);
}

TEST_CASE("hellos make adjacent nodes neighbors and carry data with no table") {
  std::unique_ptr<Simulation> sim;
  auto nodes =
      make_bench<Dymo>(sim, bench_cfg({{0.0, 0.0}, {100.0, 0.0}}, Protocol::dymo, 10.0));
  nodes[0]->inject = {{5.0, 1}};
  sim->run();

  REQUIRE(nodes[0]->inner().is_neighbor(1));
  REQUIRE(nodes[1]->inner().is_neighbor(0));
  // the neighbor shortcut carried it; no discovery, no table entry
  REQUIRE(nodes[0]->inner().route_next(1) == -1);

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 1);
  // control is hello beacons only, one per node per interval
  REQUIRE(m.control_tx >= 18);
  REQUIRE(m.control_tx <= 24);
}

TEST_CASE("a ring-one miss widens the search until the reply installs hops") {
  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dymo>(
      sim, bench_cfg({{0.0, 0.0}, {200.0, 0.0}, {400.0, 0.0}}, Protocol::dymo, 15.0));
  nodes[0]->inject = {{5.0, 2}};
  sim->record_delays(true);
  sim->run();

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 1);
  REQUIRE(nodes[0]->inner().route_next(2) == 1);
  REQUIRE(nodes[0]->inner().route_hops(2) == 2);
  REQUIRE(nodes[2]->inner().route_next(0) == 1);
  REQUIRE(nodes[2]->inner().route_hops(0) == 2);
  // the first ring stops one hop out, so delivery waits out at least one
  // request timeout before the wider ring gets through
  REQUIRE(m.delays.size() == 1);
  REQUIRE(m.delays[0] > 1.0);
  REQUIRE(m.delays[0] < 2.5);
}

TEST_CASE("an unreachable destination is given up on and then held off") {
  std::unique_ptr<Simulation> sim;
  auto nodes =
      make_bench<Dymo>(sim, bench_cfg({{0.0, 0.0}, {5000.0, 0.0}}, Protocol::dymo, 30.0));
  // the ladder runs 2..10; at 12 the holdoff still bites; by 16 it has lapsed
  nodes[0]->inject = {{2.0, 1}, {12.0, 1}, {16.0, 1}};
  sim->run();

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_sent == 3);
  REQUIRE(m.data_delivered == 0);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::discovery_failed)] == 2);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::holdoff)] == 1);
  REQUIRE(nodes[0]->inner().buffered_count() == 0);
  REQUIRE(m.conserved());
}

TEST_CASE("the widened profile searches longer before giving up") {
  // same injection schedule under both profiles; the second packet lands
  // inside the longer ladder of the widened profile but after the stock
  // ladder has already given up, so the drop reasons split differently
  auto run = [](Variant v) {
    std::unique_ptr<Simulation> sim;
    auto nodes = make_bench<Dymo>(
        sim, bench_cfg({{0.0, 0.0}, {5000.0, 0.0}}, Protocol::dymo, 20.0, v));
    nodes[0]->inject = {{2.0, 1}, {11.0, 1}, {14.5, 1}};
    sim->run();
    MetricsReport m = sim->metrics();
    return std::make_pair(
        m.drops_by_reason[static_cast<std::size_t>(DropReason::discovery_failed)],
        m.drops_by_reason[static_cast<std::size_t>(DropReason::holdoff)]);
  };

  auto [def_failed, def_held] = run(Variant::def);
  auto [mod_failed, mod_held] = run(Variant::mod);
  REQUIRE(def_failed == 1);
  REQUIRE(def_held == 2);
  REQUIRE(mod_failed == 2);
  REQUIRE(mod_held == 1);
}

TEST_CASE("missed hellos kill the neighbor and the routes through it") {
  // relay 1 departs after the route is in place
  const char* tr = "/tmp/adhoclab_dymo_sweep.txt";
  {
    std::ofstream out(tr);
    out << "0 0 0 0\n";
    out << "0 1 200 0\n8 1 200 0\n10 1 5000 5000\n";
    out << "0 2 400 0\n";
  }
  ScenarioConfig cfg = bench_cfg({}, Protocol::dymo, 25.0);
  cfg.node_count = 3;
  cfg.mobility.model = MobilityModel::trace;
  cfg.mobility.trace_file = tr;

  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dymo>(sim, cfg);
  nodes[0]->inject = {{5.0, 2}, {15.0, 2}};
  sim->run();
  std::remove(tr);

  REQUIRE_FALSE(nodes[0]->inner().is_neighbor(1));
  REQUIRE(nodes[0]->inner().route_next(2) == -1);

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 1);  // before the departure
  REQUIRE(m.data_dropped == 1);    // after it, discovery finds nobody
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::discovery_failed)] == 1);
  REQUIRE(m.conserved());
}

TEST_CASE("a break error from the relay erases the dependent upstream route") {
  // this time the far end departs; the relay notices and warns the origin
  const char* tr = "/tmp/adhoclab_dymo_rerr.txt";
  {
    std::ofstream out(tr);
    out << "0 0 0 0\n0 1 200 0\n";
    out << "0 2 400 0\n8 2 400 0\n10 2 5000 5000\n";
  }
  ScenarioConfig cfg = bench_cfg({}, Protocol::dymo, 25.0);
  cfg.node_count = 3;
  cfg.mobility.model = MobilityModel::trace;
  cfg.mobility.trace_file = tr;

  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dymo>(sim, cfg);
  nodes[0]->inject = {{5.0, 2}, {15.0, 2}};
  sim->run();
  std::remove(tr);

  // the relay stayed; only the received error can have scrubbed the entry
  REQUIRE(nodes[0]->inner().is_neighbor(1));
  REQUIRE(nodes[0]->inner().route_next(2) == -1);
  REQUIRE_FALSE(nodes[1]->inner().is_neighbor(2));

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 1);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::discovery_failed)] == 1);
  REQUIRE(m.conserved());
}

TEST_CASE("queued packets overflow oldest-first and die with the discovery") {
  std::unique_ptr<Simulation> sim;
  auto nodes =
      make_bench<Dymo>(sim, bench_cfg({{0.0, 0.0}, {5000.0, 0.0}}, Protocol::dymo, 15.0));
  for (int i = 0; i < 66; ++i)
    nodes[0]->inject.push_back({1.0 + 0.05 * i, 1});
  sim->run();

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_sent == 66);
  REQUIRE(m.data_delivered == 0);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::buffer_overflow)] == 2);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::discovery_failed)] == 64);
  REQUIRE(nodes[0]->inner().buffered_count() == 0);
  REQUIRE(m.conserved());
}
