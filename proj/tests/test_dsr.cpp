#include <catch2/catch_amalgamated.hpp>

#include <adhoclab/sim/dsr.hpp>

#include <cstdio>
#include <fstream>
#include <vector>

#include "sim_driver.hpp"

using namespace adhoclab;
using namespace adhoclab::sim;
using adhoclab::test::bench_cfg;
using adhoclab::test::make_bench;

namespace {
std::vector<NodeId> path(std::initializer_list<NodeId> ids) { return ids; }
}  // namespace

TEST_CASE("discovery over a chain caches the full source route at the origin") {
  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dsr>(
      sim, bench_cfg({{0.0, 0.0}, {200.0, 0.0}, {400.0, 0.0}}, Protocol::dsr, 20.0));
  nodes[0]->inject = {{2.0, 2}};
  sim->run();

  REQUIRE(nodes[0]->inner().route_to(2) == path({0, 1, 2}));
  REQUIRE(nodes[0]->inner().discovery_pool_size() == 1);
  REQUIRE(nodes[0]->inner().buffered_count() == 0);
  // relay kept the reply suffix, target kept the reversed request path
  REQUIRE(nodes[1]->inner().route_to(2) == path({1, 2}));
  REQUIRE(nodes[2]->inner().route_to(0) == path({2, 1, 0}));

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_sent == 1);
  REQUIRE(m.data_delivered == 1);
  REQUIRE(m.data_dropped == 0);
  // request, one re-flood, reply, reply forward; data moves outside control
  REQUIRE(m.control_tx == 4);
  REQUIRE(m.conserved());
}

TEST_CASE("an intermediate with a cached tail answers instead of re-flooding") {
  // 0 starts out of earshot while 1 primes its cache, then walks in and asks
  const char* tr = "/tmp/adhoclab_dsr_splice.txt";
  {
    std::ofstream out(tr);
    out << "0 0 200 -400\n5 0 200 -400\n7 0 0 0\n";
    out << "0 1 200 0\n0 2 400 0\n0 3 600 0\n";
  }
  ScenarioConfig cfg = bench_cfg({}, Protocol::dsr, 20.0);
  cfg.node_count = 4;
  cfg.mobility.model = MobilityModel::trace;
  cfg.mobility.trace_file = tr;

  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dsr>(sim, cfg);
  nodes[1]->inject = {{2.0, 3}};
  nodes[0]->inject = {{8.0, 3}};
  sim->run();
  std::remove(tr);

  // the spliced reply stitched 1's cached tail onto 0's request
  REQUIRE(nodes[0]->inner().route_to(3) == path({0, 1, 2, 3}));
  // the flood never widened past 1, so nothing downstream ever heard of 0
  REQUIRE(nodes[2]->inner().route_to(0).empty());
  REQUIRE(nodes[3]->inner().route_to(0).empty());
  REQUIRE(nodes[3]->inner().tap_pool_size() == 1);

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 2);
  // priming took rreq + re-flood + rrep + forward, the ask only rreq + rrep
  REQUIRE(m.control_tx == 6);
}

TEST_CASE("a failed first hop is salvaged once from an alternate cached route") {
  // diamond: bottom 0-1-2 in two short hops, top arc 0-3-4-2; 1 walks away
  const char* tr = "/tmp/adhoclab_dsr_salvage.txt";
  {
    std::ofstream out(tr);
    out << "0 0 0 0\n";
    out << "0 1 150 0\n6 1 150 0\n8 1 5000 5000\n";
    out << "0 2 300 0\n0 3 0 240\n0 4 240 240\n";
  }
  ScenarioConfig cfg = bench_cfg({}, Protocol::dsr, 20.0);
  cfg.node_count = 5;
  cfg.mobility.model = MobilityModel::trace;
  cfg.mobility.trace_file = tr;

  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dsr>(sim, cfg);
  nodes[0]->inject = {{2.0, 2}, {10.0, 2}};
  sim->run();
  std::remove(tr);

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_sent == 2);
  REQUIRE(m.data_delivered == 2);  // second delivery rode the salvage
  REQUIRE(m.data_dropped == 0);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::salvage_exhausted)] == 0);
  // the dead edge was purged everywhere 0 had it cached
  REQUIRE(nodes[0]->inner().route_to(2) == path({0, 3, 4, 2}));
  REQUIRE(m.conserved());
}

TEST_CASE("a mid-route break sends an error back that purges the origin cache") {
  const char* tr = "/tmp/adhoclab_dsr_rerr.txt";
  {
    std::ofstream out(tr);
    out << "0 0 0 0\n0 1 200 0\n";
    out << "0 2 400 0\n6 2 400 0\n8 2 5000 5000\n";  // relay 2 departs
    out << "0 3 600 0\n";
  }
  ScenarioConfig cfg = bench_cfg({}, Protocol::dsr, 20.0);
  cfg.node_count = 4;
  cfg.mobility.model = MobilityModel::trace;
  cfg.mobility.trace_file = tr;

  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dsr>(sim, cfg);
  nodes[0]->inject = {{2.0, 3}, {10.0, 3}};
  sim->run();
  std::remove(tr);

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 1);
  REQUIRE(m.data_dropped == 1);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::link_failed)] == 1);
  // the error reached 0 and stripped every path crossing the broken edge
  REQUIRE(nodes[0]->inner().route_to(3).empty());
  REQUIRE(nodes[1]->inner().route_to(3).empty());
  // chain discovery was 6 control sends, the break report added one error
  REQUIRE(m.control_tx == 7);
  REQUIRE(m.conserved());
}

TEST_CASE("the send buffer sheds oldest on overflow and ages the rest out") {
  // destination unreachable forever: everything queues, nothing flushes
  std::unique_ptr<Simulation> sim;
  auto nodes =
      make_bench<Dsr>(sim, bench_cfg({{0.0, 0.0}, {5000.0, 0.0}}, Protocol::dsr, 40.0));
  for (int i = 0; i < 66; ++i)
    nodes[0]->inject.push_back({1.0 + 0.05 * i, 1});
  sim->run();

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_sent == 66);
  REQUIRE(m.data_delivered == 0);
  // two pushed past the 64-slot cap, the rest sat until their lifetime ran out
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::buffer_overflow)] == 2);
  REQUIRE(m.drops_by_reason[static_cast<std::size_t>(DropReason::buffer_timeout)] == 64);
  REQUIRE(m.data_dropped == 66);
  REQUIRE(nodes[0]->inner().buffered_count() == 0);
  // one request up front, then doubling-backoff retries until the buffer dies
  REQUIRE(m.control_tx == 7);
  REQUIRE(m.conserved());
}

TEST_CASE("overheard traffic seeds routes that skip discovery entirely") {
  // 3 sits beside the 0-1-2 chain, close to 1 and 2 but hidden from 0
  std::unique_ptr<Simulation> sim;
  auto nodes = make_bench<Dsr>(
      sim, bench_cfg({{0.0, 0.0}, {200.0, 0.0}, {400.0, 0.0}, {300.0, 180.0}},
                     Protocol::dsr, 20.0));
  nodes[0]->inject = {{2.0, 2}};
  nodes[3]->inject = {{6.0, 2}};
  sim->record_delays(true);
  sim->run();

  MetricsReport m = sim->metrics();
  REQUIRE(m.data_delivered == 2);
  REQUIRE(m.data_dropped == 0);
  // 3 never ran a discovery of its own
  REQUIRE(nodes[3]->inner().discovery_pool_size() == 0);
  // taps: the reply overheard in flight and the relay's data forward
  REQUIRE(nodes[3]->inner().tap_pool_size() == 2);
  REQUIRE(nodes[3]->inner().route_to(2) == path({3, 2}));
  // with a one-hop tap in hand the second delivery was immediate
  REQUIRE(m.delays.size() == 2);
  REQUIRE(m.delays[1] < 0.004);
}
