#include <catch2/catch_amalgamated.hpp>

#include <adhoclab/scenario.hpp>

#include <sstream>

using namespace adhoclab;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("an empty file yields the documented defaults") {
  ScenarioConfig cfg = parse("");
  REQUIRE(cfg.network == Network::manet);
  REQUIRE(cfg.node_count == 30);
  REQUIRE(cfg.protocol == sim::Protocol::dsdv);
  REQUIRE(cfg.variant == sim::Variant::def);
  REQUIRE(cfg.sim_time == 900.0);
  REQUIRE(cfg.cbr_sources == 12);
  REQUIRE(cfg.cbr_rate == 4.0);
  REQUIRE(cfg.packet_size == 1000);
  REQUIRE(cfg.warmup == 50.0);
  REQUIRE(cfg.seed == 1);
  // manet implies random waypoint and the heavier loss
  REQUIRE(cfg.mobility.model == sim::MobilityModel::rwp);
  REQUIRE(cfg.radio.loss_prob == 0.02);
}

TEST_CASE("the network kind drives mobility and loss defaults") {
  ScenarioConfig cfg = parse("network=vanet\n");
  REQUIRE(cfg.mobility.model == sim::MobilityModel::road);
  REQUIRE(cfg.radio.loss_prob == 0.01);

  // an explicit mobility model overrides the network default
  cfg = parse("network=vanet\n[mobility]\nmodel=rwp\n");
  REQUIRE(cfg.mobility.model == sim::MobilityModel::rwp);
  REQUIRE(cfg.radio.loss_prob == 0.01);

  // an explicit loss probability survives too
  cfg = parse("network=vanet\n[radio]\nloss_prob=0.3\n");
  REQUIRE(cfg.radio.loss_prob == 0.3);
  REQUIRE(cfg.mobility.model == sim::MobilityModel::road);
}

TEST_CASE("comments, blank lines and whitespace are tolerated") {
  ScenarioConfig cfg = parse(
      "# a scenario\n"
      "\n"
      "  node_count = 17  \n"
      "\tprotocol=dymo\r\n"
      "variant=modified\n"
      "# trailing comment\n");
  REQUIRE(cfg.node_count == 17);
  REQUIRE(cfg.protocol == sim::Protocol::dymo);
  REQUIRE(cfg.variant == sim::Variant::mod);
}

TEST_CASE("sections route keys to the right sub-config") {
  ScenarioConfig cfg = parse(
      "network=manet\n"
      "[mobility]\n"
      "speed=20\n"
      "pause_time=2\n"
      "[radio]\n"
      "range=100\n"
      "tx_serialize=0.006\n"
      "retry_limit=2\n");
  REQUIRE(cfg.mobility.speed == 20.0);
  REQUIRE(cfg.mobility.pause_time == 2.0);
  REQUIRE(cfg.radio.range == 100.0);
  REQUIRE(cfg.radio.tx_serialize == 0.006);
  REQUIRE(cfg.radio.retry_limit == 2);
}

TEST_CASE("explicit positions parse as semicolon-separated pairs") {
  ScenarioConfig cfg = parse(
      "[mobility]\n"
      "model=static\n"
      "positions=0,0; 10.5,20 ;30,40\n");
  REQUIRE(cfg.mobility.positions.size() == 3);
  REQUIRE(cfg.mobility.positions[1].x == 10.5);
  REQUIRE(cfg.mobility.positions[2].y == 40.0);
}

TEST_CASE("unknown keys are all reported together with their section") {
  try {
    parse("bogus=1\n[mobility]\nwarp=9\n[radio]\ngain=3\n");
    FAIL("expected a config error");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    REQUIRE(msg.find("bogus") != std::string::npos);
    REQUIRE(msg.find("mobility.warp") != std::string::npos);
    REQUIRE(msg.find("radio.gain") != std::string::npos);
  }
}

TEST_CASE("parse errors carry the line number") {
  REQUIRE_THROWS_WITH(parse("node_count=30\nsim_time=abc\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
  REQUIRE_THROWS_WITH(parse("\n\nnot a pair\n"),
                      Catch::Matchers::ContainsSubstring("line 3"));
  REQUIRE_THROWS_WITH(parse("[mobility\nspeed=1\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
  REQUIRE_THROWS_WITH(parse("[physics]\n"),
                      Catch::Matchers::ContainsSubstring("unknown section"));
  REQUIRE_THROWS_WITH(parse("node_count=12.5\n"),
                      Catch::Matchers::ContainsSubstring("bad integer"));
  REQUIRE_THROWS_WITH(parse("[mobility]\npositions=1;2,3\n"),
                      Catch::Matchers::ContainsSubstring("x,y pairs"));
}

TEST_CASE("enumerated values reject unknown spellings") {
  REQUIRE_THROWS_WITH(parse("network=wired\n"),
                      Catch::Matchers::ContainsSubstring("unknown network"));
  REQUIRE_THROWS_WITH(parse("protocol=aodv\n"),
                      Catch::Matchers::ContainsSubstring("unknown protocol"));
  REQUIRE_THROWS_WITH(parse("variant=fast\n"),
                      Catch::Matchers::ContainsSubstring("unknown variant"));
  REQUIRE_THROWS_WITH(parse("[mobility]\nmodel=brownian\n"),
                      Catch::Matchers::ContainsSubstring("unknown mobility model"));
}

TEST_CASE("semantic validation runs after parsing") {
  REQUIRE_THROWS_AS(parse("node_count=5\ncbr_sources=9\n"), std::domain_error);
  REQUIRE_THROWS_AS(parse("sim_time=0\n"), std::domain_error);
  REQUIRE_THROWS_AS(parse("node_count=0\n"), std::domain_error);
  REQUIRE_THROWS_AS(parse("[radio]\nloss_prob=1.0\n"), std::domain_error);
  REQUIRE_THROWS_AS(parse("[mobility]\nspeed=0\n"), std::domain_error);
}

TEST_CASE("zero sources is a legal quiet scenario") {
  ScenarioConfig cfg = parse("cbr_sources=0\n");
  REQUIRE(cfg.cbr_sources == 0);
}

TEST_CASE("save and parse round-trip to identical text") {
  ScenarioConfig cfg = parse(
      "network=vanet\n"
      "node_count=40\n"
      "protocol=dsr\n"
      "variant=modified\n"
      "sim_time=300\n"
      "seed=42\n"
      "[mobility]\n"
      "sigma=3\n"
      "lane_gap=7.5\n"
      "[radio]\n"
      "loss_prob=0.05\n");
  std::string text = save_config(cfg);
  std::istringstream round(text);
  ScenarioConfig cfg2 = parse_config(round);
  REQUIRE(save_config(cfg2) == text);
  REQUIRE(cfg2.network == Network::vanet);
  REQUIRE(cfg2.mobility.sigma == 3.0);
  REQUIRE(cfg2.radio.loss_prob == 0.05);
  REQUIRE(cfg2.seed == 42);
}

TEST_CASE("round-trip preserves explicit positions and trace files") {
  ScenarioConfig cfg;
  cfg.node_count = 2;
  cfg.cbr_sources = 1;
  cfg.mobility.model = sim::MobilityModel::static_layout;
  cfg.mobility.positions = {{1.25, 2.5}, {300.0, 0.125}};
  std::string text = save_config(cfg);
  std::istringstream round(text);
  ScenarioConfig cfg2 = parse_config(round);
  REQUIRE(cfg2.mobility.positions.size() == 2);
  REQUIRE(cfg2.mobility.positions[0].x == 1.25);
  REQUIRE(cfg2.mobility.positions[1].y == 0.125);
  REQUIRE(save_config(cfg2) == text);

  cfg.mobility.model = sim::MobilityModel::trace;
  cfg.mobility.trace_file = "/tmp/some_trace.txt";
  std::string text2 = save_config(cfg);
  std::istringstream round2(text2);
  REQUIRE(parse_config(round2).mobility.trace_file == "/tmp/some_trace.txt");
}

TEST_CASE("loading a missing file names the path") {
  REQUIRE_THROWS_WITH(load_config("/nonexistent/dir/scenario.cfg"),
                      Catch::Matchers::ContainsSubstring("/nonexistent/dir/scenario.cfg"));
}
