#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <adhoclab/format.hpp>
#include <adhoclab/sim/mobility.hpp>
#include <adhoclab/sim/profile.hpp>
#include <adhoclab/sim/radio.hpp>

namespace adhoclab {

enum class Network { manet, vanet };

inline std::string network_name(Network n) { return n == Network::manet ? "manet" : "vanet"; }

struct ScenarioConfig {
  Network network = Network::manet;
  int node_count = 30;
  sim::Protocol protocol = sim::Protocol::dsdv;
  sim::Variant variant = sim::Variant::def;
  double sim_time = 900.0;
  int cbr_sources = 12;
  double cbr_rate = 4.0;   // packets per second per source
  int packet_size = 1000;  // bytes
  double warmup = 50.0;    // excluded from metric counting
  std::uint64_t seed = 1;
  sim::MobilityConfig mobility;
  sim::RadioModel radio;

  void validate() const {
    if (node_count < 1) throw std::domain_error("scenario: node_count must be >= 1");
    if (!(sim_time > 0.0)) throw std::domain_error("scenario: sim_time must be > 0");
    if (cbr_sources < 0) throw std::domain_error("scenario: cbr_sources must be >= 0");
    if (cbr_sources > node_count)
      throw std::domain_error("scenario: cbr_sources must be <= node_count");
    if (!(cbr_rate > 0.0)) throw std::domain_error("scenario: cbr_rate must be > 0");
    if (packet_size <= 0) throw std::domain_error("scenario: packet_size must be > 0");
    if (warmup < 0.0) throw std::domain_error("scenario: warmup must be >= 0");
    mobility.validate();
    radio.validate();
  }
};

/* Sets the knobs that follow from the network kind: road mobility and the
 * lighter per-hop loss for vanet, random waypoint and the heavier loss for
 * manet. Used by the config loader for absent keys and by sweep axes. */
inline void apply_network_defaults(ScenarioConfig& cfg, Network n, bool set_mobility = true,
                                   bool set_loss = true) {
  cfg.network = n;
  if (set_mobility)
    cfg.mobility.model =
        (n == Network::vanet) ? sim::MobilityModel::road : sim::MobilityModel::rwp;
  if (set_loss) cfg.radio.loss_prob = (n == Network::vanet) ? 0.01 : 0.02;
}

namespace detail {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": bad number '" + v + "'");
  }
}

inline std::int64_t parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    std::int64_t d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": bad integer '" + v + "'");
  }
}

inline std::vector<sim::Vec2> parse_positions(const std::string& v, int line) {
  std::vector<sim::Vec2> out;
  std::istringstream ss(v);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    std::size_t comma = pair.find(',');
    if (comma == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) + ": positions need x,y pairs");
    out.push_back(sim::Vec2{parse_double(trim(pair.substr(0, comma)), line),
                            parse_double(trim(pair.substr(comma + 1)), line)});
  }
  return out;
}

inline std::string positions_text(const std::vector<sim::Vec2>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ';';
    out += format_double(ps[i].x);
    out += ',';
    out += format_double(ps[i].y);
  }
  return out;
}

}  // namespace detail

/* Parses the line-oriented scenario format: `key=value`, `#` comments,
 * optional [mobility] / [radio] sections. Absent keys keep their defaults;
 * unknown keys are collected and reported together. */
inline ScenarioConfig parse_config(std::istream& in) {
  using detail::ConfigError;
  ScenarioConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  std::vector<std::string> unknown;
  bool mobility_model_set = false;
  bool loss_prob_set = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section != "mobility" && section != "radio")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));

    auto bad_value = [&](const std::string& what) {
      return ConfigError("config line " + std::to_string(lineno) + ": " + what + " '" + val +
                         "'");
    };

    if (section.empty()) {
      if (key == "network") {
        if (val == "manet")
          cfg.network = Network::manet;
        else if (val == "vanet")
          cfg.network = Network::vanet;
        else
          throw bad_value("unknown network");
      } else if (key == "node_count") {
        cfg.node_count = static_cast<int>(detail::parse_int(val, lineno));
      } else if (key == "protocol") {
        if (val == "dsdv")
          cfg.protocol = sim::Protocol::dsdv;
        else if (val == "dsr")
          cfg.protocol = sim::Protocol::dsr;
        else if (val == "dymo")
          cfg.protocol = sim::Protocol::dymo;
        else
          throw bad_value("unknown protocol");
      } else if (key == "variant") {
        if (val == "default")
          cfg.variant = sim::Variant::def;
        else if (val == "modified")
          cfg.variant = sim::Variant::mod;
        else
          throw bad_value("unknown variant");
      } else if (key == "sim_time") {
        cfg.sim_time = detail::parse_double(val, lineno);
      } else if (key == "cbr_sources") {
        cfg.cbr_sources = static_cast<int>(detail::parse_int(val, lineno));
      } else if (key == "cbr_rate") {
        cfg.cbr_rate = detail::parse_double(val, lineno);
      } else if (key == "packet_size") {
        cfg.packet_size = static_cast<int>(detail::parse_int(val, lineno));
      } else if (key == "warmup") {
        cfg.warmup = detail::parse_double(val, lineno);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(detail::parse_int(val, lineno));
      } else {
        unknown.push_back(key);
      }
    } else if (section == "mobility") {
      if (key == "model") {
        if (val == "rwp")
          cfg.mobility.model = sim::MobilityModel::rwp;
        else if (val == "road")
          cfg.mobility.model = sim::MobilityModel::road;
        else if (val == "static")
          cfg.mobility.model = sim::MobilityModel::static_layout;
        else if (val == "trace")
          cfg.mobility.model = sim::MobilityModel::trace;
        else
          throw bad_value("unknown mobility model");
        mobility_model_set = true;
      } else if (key == "width") {
        cfg.mobility.width = detail::parse_double(val, lineno);
      } else if (key == "height") {
        cfg.mobility.height = detail::parse_double(val, lineno);
      } else if (key == "road_length") {
        cfg.mobility.road_length = detail::parse_double(val, lineno);
      } else if (key == "speed") {
        cfg.mobility.speed = detail::parse_double(val, lineno);
      } else if (key == "pause_time") {
        cfg.mobility.pause_time = detail::parse_double(val, lineno);
      } else if (key == "lambda") {
        cfg.mobility.lambda = detail::parse_double(val, lineno);
      } else if (key == "sigma") {
        cfg.mobility.sigma = detail::parse_double(val, lineno);
      } else if (key == "lane_gap") {
        cfg.mobility.lane_gap = detail::parse_double(val, lineno);
      } else if (key == "positions") {
        cfg.mobility.positions = detail::parse_positions(val, lineno);
      } else if (key == "trace_file") {
        cfg.mobility.trace_file = val;
      } else {
        unknown.push_back("mobility." + key);
      }
    } else {  // radio
      if (key == "range") {
        cfg.radio.range = detail::parse_double(val, lineno);
      } else if (key == "collision_window") {
        cfg.radio.collision_window = detail::parse_double(val, lineno);
      } else if (key == "per_hop_latency") {
        cfg.radio.per_hop_latency = detail::parse_double(val, lineno);
      } else if (key == "tx_serialize") {
        cfg.radio.tx_serialize = detail::parse_double(val, lineno);
      } else if (key == "retry_limit") {
        cfg.radio.retry_limit = static_cast<int>(detail::parse_int(val, lineno));
      } else if (key == "retry_backoff") {
        cfg.radio.retry_backoff = detail::parse_double(val, lineno);
      } else if (key == "loss_prob") {
        cfg.radio.loss_prob = detail::parse_double(val, lineno);
        loss_prob_set = true;
      } else {
        unknown.push_back("radio." + key);
      }
    }
  }

  if (!unknown.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

  // keys the file left out follow the network kind
  apply_network_defaults(cfg, cfg.network, !mobility_model_set, !loss_prob_set);
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw detail::ConfigError("config: cannot open " + path);
  return parse_config(in);
}

/* Emits the normalized text form: every key explicit, fixed order, stable
 * number formatting. load(save(cfg)) round-trips to identical text. */
inline std::string save_config(const ScenarioConfig& cfg) {
  std::string out;
  auto kv = [&out](const char* k, const std::string& v) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  };
  kv("network", network_name(cfg.network));
  kv("node_count", format_int(cfg.node_count));
  kv("protocol", sim::protocol_name(cfg.protocol));
  kv("variant", sim::variant_name(cfg.variant));
  kv("sim_time", format_double(cfg.sim_time));
  kv("cbr_sources", format_int(cfg.cbr_sources));
  kv("cbr_rate", format_double(cfg.cbr_rate));
  kv("packet_size", format_int(cfg.packet_size));
  kv("warmup", format_double(cfg.warmup));
  kv("seed", format_uint(cfg.seed));
  out += "\n[mobility]\n";
  switch (cfg.mobility.model) {
    case sim::MobilityModel::rwp: kv("model", "rwp"); break;
    case sim::MobilityModel::road: kv("model", "road"); break;
    case sim::MobilityModel::static_layout: kv("model", "static"); break;
    case sim::MobilityModel::trace: kv("model", "trace"); break;
  }
  kv("width", format_double(cfg.mobility.width));
  kv("height", format_double(cfg.mobility.height));
  kv("road_length", format_double(cfg.mobility.road_length));
  kv("speed", format_double(cfg.mobility.speed));
  kv("pause_time", format_double(cfg.mobility.pause_time));
  kv("lambda", format_double(cfg.mobility.lambda));
  kv("sigma", format_double(cfg.mobility.sigma));
  kv("lane_gap", format_double(cfg.mobility.lane_gap));
  if (!cfg.mobility.positions.empty())
    kv("positions", detail::positions_text(cfg.mobility.positions));
  if (!cfg.mobility.trace_file.empty()) kv("trace_file", cfg.mobility.trace_file);
  out += "\n[radio]\n";
  kv("range", format_double(cfg.radio.range));
  kv("collision_window", format_double(cfg.radio.collision_window));
  kv("per_hop_latency", format_double(cfg.radio.per_hop_latency));
  kv("tx_serialize", format_double(cfg.radio.tx_serialize));
  kv("retry_limit", format_int(cfg.radio.retry_limit));
  kv("retry_backoff", format_double(cfg.radio.retry_backoff));
  kv("loss_prob", format_double(cfg.radio.loss_prob));
  return out;
}

}  // namespace adhoclab
