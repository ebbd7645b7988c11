#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <adhoclab/analytic.hpp>
#include <adhoclab/format.hpp>
#include <adhoclab/metrics.hpp>
#include <adhoclab/overhead.hpp>
#include <adhoclab/scenario.hpp>
#include <adhoclab/sim/dsdv.hpp>
#include <adhoclab/sim/dsr.hpp>
#include <adhoclab/sim/dymo.hpp>
#include <adhoclab/sim/kernel.hpp>

namespace adhoclab {

inline std::vector<std::unique_ptr<sim::RoutingProtocol>> make_protocols(
    const ScenarioConfig& cfg) {
  std::vector<std::unique_ptr<sim::RoutingProtocol>> v;
  v.reserve(static_cast<std::size_t>(cfg.node_count));
  for (int i = 0; i < cfg.node_count; ++i) {
    switch (cfg.protocol) {
      case sim::Protocol::dsdv: v.push_back(std::make_unique<sim::Dsdv>()); break;
      case sim::Protocol::dsr: v.push_back(std::make_unique<sim::Dsr>()); break;
      case sim::Protocol::dymo: v.push_back(std::make_unique<sim::Dymo>()); break;
    }
  }
  return v;
}

inline MetricsReport run_scenario(const ScenarioConfig& cfg) {
  sim::Simulation s(cfg);
  s.attach(make_protocols(cfg));
  s.run();
  return s.metrics();
}

// ---- sweeps ----

struct SweepAxes {
  std::vector<int> node_counts;
  std::vector<sim::Protocol> protocols;
  std::vector<sim::Variant> variants;
  std::vector<Network> networks;
  int seed_count = 5;  // runs seeds 1..seed_count
};

/* counters live as doubles so data rows and mean/stddev summary rows share
 * one shape; data-row values are integers and format losslessly */
struct SweepRow {
  Network network = Network::manet;
  sim::Protocol protocol = sim::Protocol::dsdv;
  sim::Variant variant = sim::Variant::def;
  int node_count = 0;
  std::string seed;  // integer text, or "mean" / "stddev"
  double data_sent = 0.0;
  double data_delivered = 0.0;
  double data_dropped = 0.0;
  double data_in_flight = 0.0;
  double control_tx = 0.0;
  double pdr = 0.0;
  std::optional<double> ae2ed;
  std::optional<double> nro;
};

inline constexpr const char* kSweepHeader =
    "network,protocol,variant,node_count,seed,data_sent,data_delivered,data_dropped,"
    "data_in_flight,control_tx,pdr,ae2ed,nro";

inline SweepRow make_sweep_row(const ScenarioConfig& cfg, const MetricsReport& m) {
  SweepRow r;
  r.network = cfg.network;
  r.protocol = cfg.protocol;
  r.variant = cfg.variant;
  r.node_count = cfg.node_count;
  r.seed = format_int(static_cast<long long>(cfg.seed));
  r.data_sent = static_cast<double>(m.data_sent);
  r.data_delivered = static_cast<double>(m.data_delivered);
  r.data_dropped = static_cast<double>(m.data_dropped);
  r.data_in_flight = static_cast<double>(m.data_in_flight);
  r.control_tx = static_cast<double>(m.control_tx);
  r.pdr = m.pdr;
  r.ae2ed = m.ae2ed;
  r.nro = m.nro;
  return r;
}

namespace detail {

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

/* mean and stddev rows for one cell's seed rows */
inline void append_cell_summary(std::vector<SweepRow>& out, const std::vector<SweepRow>& cell) {
  auto gather = [&cell](auto pick) {
    std::vector<double> xs;
    for (const SweepRow& r : cell) {
      auto v = pick(r);
      if (v) xs.push_back(*v);
    }
    return xs;
  };
  std::vector<double> sent = gather([](const SweepRow& r) { return std::optional<double>(r.data_sent); });
  std::vector<double> deliv = gather([](const SweepRow& r) { return std::optional<double>(r.data_delivered); });
  std::vector<double> dropped = gather([](const SweepRow& r) { return std::optional<double>(r.data_dropped); });
  std::vector<double> inflight = gather([](const SweepRow& r) { return std::optional<double>(r.data_in_flight); });
  std::vector<double> control = gather([](const SweepRow& r) { return std::optional<double>(r.control_tx); });
  std::vector<double> pdr = gather([](const SweepRow& r) { return std::optional<double>(r.pdr); });
  std::vector<double> ae = gather([](const SweepRow& r) { return r.ae2ed; });
  std::vector<double> nro = gather([](const SweepRow& r) { return r.nro; });

  for (const char* label : {"mean", "stddev"}) {
    bool m = label[0] == 'm';
    SweepRow s = cell.front();
    s.seed = label;
    s.data_sent = m ? mean_of(sent) : stddev_of(sent);
    s.data_delivered = m ? mean_of(deliv) : stddev_of(deliv);
    s.data_dropped = m ? mean_of(dropped) : stddev_of(dropped);
    s.data_in_flight = m ? mean_of(inflight) : stddev_of(inflight);
    s.control_tx = m ? mean_of(control) : stddev_of(control);
    s.pdr = m ? mean_of(pdr) : stddev_of(pdr);
    s.ae2ed = ae.empty() ? std::nullopt
                         : std::optional<double>(m ? mean_of(ae) : stddev_of(ae));
    s.nro = nro.empty() ? std::nullopt
                        : std::optional<double>(m ? mean_of(nro) : stddev_of(nro));
    out.push_back(std::move(s));
  }
}

}  // namespace detail

/* One run per axis combination, rows ordered by (network, protocol, variant,
 * node_count, seed), then per-cell mean/stddev summary rows appended in the
 * same cell order. The cell's network picks the mobility model and loss rate;
 * cbr_sources is capped at the cell's node count. */
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, SweepAxes axes) {
  if (axes.node_counts.empty() || axes.protocols.empty() || axes.variants.empty() ||
      axes.networks.empty() || axes.seed_count < 1)
    throw std::invalid_argument("sweep: every axis needs at least one value");
  auto sort_unique = [](auto& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(axes.node_counts);
  sort_unique(axes.protocols);
  sort_unique(axes.variants);
  sort_unique(axes.networks);

  std::vector<SweepRow> rows;
  std::vector<std::vector<SweepRow>> cells;
  for (Network net : axes.networks) {
    for (sim::Protocol proto : axes.protocols) {
      for (sim::Variant var : axes.variants) {
        for (int n : axes.node_counts) {
          std::vector<SweepRow> cell;
          for (int seed = 1; seed <= axes.seed_count; ++seed) {
            ScenarioConfig cfg = base;
            cfg.protocol = proto;
            cfg.variant = var;
            cfg.node_count = n;
            cfg.seed = seed;
            cfg.cbr_sources = std::min(base.cbr_sources, n);
            apply_network_defaults(cfg, net);
            const std::string where = "sweep cell network=" + network_name(net) +
                                      " protocol=" + sim::protocol_name(proto) +
                                      " variant=" + sim::variant_name(var) +
                                      " node_count=" + format_int(n) +
                                      " seed=" + format_int(seed);
            try {
              cell.push_back(make_sweep_row(cfg, run_scenario(cfg)));
            } catch (const NumericError& e) {
              throw NumericError(where + " failed: " + e.what(), e.estimate(),
                                 e.achieved_tolerance());
            } catch (const std::exception& e) {
              throw std::runtime_error(where + " failed: " + e.what());
            }
          }
          rows.insert(rows.end(), cell.begin(), cell.end());
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  for (const auto& cell : cells) detail::append_cell_summary(rows, cell);
  return rows;
}

inline void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << "\n";
  for (const SweepRow& r : rows) {
    os << network_name(r.network) << ',' << sim::protocol_name(r.protocol) << ','
       << sim::variant_name(r.variant) << ',' << format_int(r.node_count) << ',' << r.seed
       << ',' << format_double(r.data_sent) << ',' << format_double(r.data_delivered) << ','
       << format_double(r.data_dropped) << ',' << format_double(r.data_in_flight) << ','
       << format_double(r.control_tx) << ',' << format_double(r.pdr) << ','
       << (r.ae2ed ? format_double(*r.ae2ed) : std::string()) << ','
       << (r.nro ? format_double(*r.nro) : std::string()) << '\n';
  }
}

// ---- analytic curve tables ----

enum class ModelKind { pdr, delay, nro };

/* paper-grid defaults: wait times 1..25 s, morning and midnight densities,
 * overhead sampled every minute of a 900 s run */
struct ModelGrid {
  std::vector<double> lambdas{0.00025, 0.00175};
  double sigma = 3.0;
  std::vector<double> wait_times{1, 2, 3, 4, 5, 10, 15, 20, 25};
  std::vector<double> times = [] {
    std::vector<double> v;
    for (int t = 60; t <= 900; t += 60) v.push_back(static_cast<double>(t));
    return v;
  }();
  std::vector<double> hops{2, 8};
  double nro_lambda = 0.00025;  // the 10-node r/s inputs assume this density
  double ttl_ring = 10.0;
  double lb_int = 30.0;  // mean link-breakage interval, documented default
};

namespace detail {

struct NroInputs {
  const char* name;
  double r;
  double s;
  double h_int;
};

// 10-node routing/data packet counts per protocol, with each one's
// link-sensing interval (hello for reactive, periodic dump for proactive)
inline const NroInputs kNroInputs[3] = {
    {"dsdv", 547.0, 20996.0, 15.0},
    {"dsr", 917.0, 16410.0, 1.0},
    {"dymo", 4453.0, 16069.0, 1.0},
};

}  // namespace detail

inline void write_model_csv(std::ostream& os, ModelKind kind, const ModelGrid& g) {
  if (kind == ModelKind::pdr || kind == ModelKind::delay) {
    os << (kind == ModelKind::pdr ? "road,lambda,wait_time,pdr\n"
                                  : "road,lambda,wait_time,delay\n");
    for (const char* road : {"one_way", "two_way"}) {
      bool one = road[0] == 'o';
      for (double lam : g.lambdas) {
        for (double T : g.wait_times) {
          ModelParams p;
          p.lambda = lam;
          p.sigma = g.sigma;
          p.wait_t = T;
          double value = 0.0;
          try {
            if (kind == ModelKind::pdr) {
              value = one ? pdr_one_dir(p).value : pdr_two_dir(p).value;
            } else {
              double tau = one ? delay_one_dir_beta(p) : delay_two_dir_numeric(p);
              value = average_delay(tau, p);
            }
          } catch (const NumericError& e) {
            throw NumericError("model point road=" + std::string(road) +
                                   " lambda=" + format_double(lam) +
                                   " wait_time=" + format_double(T) + ": " + e.what(),
                               e.estimate(), e.achieved_tolerance());
          }
          os << road << ',' << format_double(lam) << ',' << format_double(T) << ','
             << format_double(value) << '\n';
        }
      }
    }
    return;
  }
  os << "protocol,hops,time,nro\n";
  for (const detail::NroInputs& in : detail::kNroInputs) {
    for (double h : g.hops) {
      for (double t : g.times) {
        OverheadParams p;
        p.sources = 12.0;
        p.r = in.r;
        p.s = in.s;
        p.h = h;
        p.h_int = in.h_int;
        p.lb_int = g.lb_int;
        p.trig_int = 0.8;
        p.ttl_ring = g.ttl_ring;
        p.period_t = t;
        p.lambda = g.nro_lambda;
        double value = in.name[2] == 'd'  // "dsdv"
                           ? nro_dsdv_total(p)
                           : (in.name[2] == 'r' ? nro_dsr_total(p) : nro_dymo_total(p));
        os << in.name << ',' << format_double(h) << ',' << format_double(t) << ','
           << format_double(value) << '\n';
      }
    }
  }
}

// ---- trend comparison ----

struct CompareOutcome {
  bool pass = false;
  std::string text;
};

namespace detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline CsvTable read_csv(std::istream& in, const std::string& what) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw detail::ConfigError(what + ": empty file");
  t.header = split_csv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_csv(line);
    if (row.size() != t.header.size())
      throw detail::ConfigError(what + ": row has " + format_int(static_cast<long long>(row.size())) +
                        " fields, header has " +
                        format_int(static_cast<long long>(t.header.size())));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline double to_num(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw detail::ConfigError(what + ": bad number '" + s + "'");
  return v;
}

struct TrendAgg {
  std::vector<double> pdr, ae2ed, nro;
};

}  // namespace detail

/* Ordering-based comparison: the simulated protocol ranking per cell and the
 * analytic tables' monotonicity must both match the expected trends. Absolute
 * values are never compared across the two tables. */
inline CompareOutcome compare_report(std::istream& sim_csv, std::istream& model_csv) {
  using detail::to_num;
  detail::CsvTable sim = detail::read_csv(sim_csv, "sim csv");
  detail::CsvTable model = detail::read_csv(model_csv, "model csv");

  if (detail::split_csv(kSweepHeader) != sim.header)
    throw detail::ConfigError("sim csv: unexpected schema");
  if (sim.rows.empty()) throw detail::ConfigError("sim csv: no data rows");

  // cell = (network, node_count); series = protocol-variant within the cell
  std::map<std::pair<std::string, int>, std::map<std::string, detail::TrendAgg>> cells;
  for (const auto& row : sim.rows) {
    if (row[4] == "mean" || row[4] == "stddev") continue;
    auto key = std::make_pair(row[0], static_cast<int>(to_num(row[3], "sim csv node_count")));
    detail::TrendAgg& agg = cells[key][row[1] + "-" + row[2]];
    agg.pdr.push_back(to_num(row[10], "sim csv pdr"));
    if (!row[11].empty()) agg.ae2ed.push_back(to_num(row[11], "sim csv ae2ed"));
    if (!row[12].empty()) agg.nro.push_back(to_num(row[12], "sim csv nro"));
  }
  if (cells.empty()) throw detail::ConfigError("sim csv: no data rows");

  std::ostringstream out;
  int checks = 0;
  int sim_checks = 0;
  std::vector<std::string> violations;
  auto record = [&](bool ok, const std::string& what) {
    ++checks;
    if (ok) {
      out << "ok: " << what << "\n";
    } else {
      violations.push_back(what);
      out << "VIOLATION: " << what << "\n";
    }
  };

  for (const auto& [key, series] : cells) {
    const std::string cell = "network=" + key.first + " node_count=" + format_int(key.second);
    auto find = [&series](const char* name) -> const detail::TrendAgg* {
      auto it = series.find(name);
      return it == series.end() ? nullptr : &it->second;
    };
    const detail::TrendAgg* dsr = find("dsr-default");
    const detail::TrendAgg* dymo = find("dymo-default");
    const detail::TrendAgg* dsdv = find("dsdv-default");
    auto mean = [](const std::vector<double>& v) { return detail::mean_of(v); };
    if (dsr && dymo) {
      ++sim_checks;
      record(mean(dsr->pdr) >= mean(dymo->pdr),
             "mean pdr dsr-default >= dymo-default at " + cell);
      if (!dsr->nro.empty() && !dymo->nro.empty()) {
        ++sim_checks;
        record(mean(dymo->nro) > mean(dsr->nro),
               "mean nro dymo-default > dsr-default at " + cell);
      }
    }
    if (dsr && dsdv) {
      ++sim_checks;
      record(mean(dsr->pdr) >= mean(dsdv->pdr),
             "mean pdr dsr-default >= dsdv-default at " + cell);
    }
    if (dsr && dymo && dsdv && !dsdv->ae2ed.empty() && !dsr->ae2ed.empty() &&
        !dymo->ae2ed.empty()) {
      ++sim_checks;
      record(mean(dsdv->ae2ed) <= mean(dsr->ae2ed) && mean(dsdv->ae2ed) <= mean(dymo->ae2ed),
             "mean ae2ed dsdv-default lowest at " + cell);
    }
  }
  if (sim_checks == 0) throw detail::ConfigError("sim csv: no comparable protocol pairs");

  // model table: detect which curve family it is by header
  std::vector<std::string> h = model.header;
  if (h == std::vector<std::string>{"road", "lambda", "wait_time", "pdr"} ||
      h == std::vector<std::string>{"road", "lambda", "wait_time", "delay"}) {
    const std::string value_name = h[3];
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> series;
    for (const auto& row : model.rows)
      series[{row[0], row[1]}].push_back(
          {to_num(row[2], "model csv wait_time"), to_num(row[3], "model csv value")});
    for (auto& [key, pts] : series) {
      std::sort(pts.begin(), pts.end());
      bool mono = true;
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second < pts[i - 1].second - 1e-12) mono = false;
      record(mono, "model " + value_name + " nondecreasing in wait_time at road=" + key.first +
                       " lambda=" + key.second);
    }
  } else if (h == std::vector<std::string>{"protocol", "hops", "time", "nro"}) {
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> series;
    std::map<std::pair<std::string, double>, std::map<std::string, double>> by_point;
    for (const auto& row : model.rows) {
      double t = to_num(row[2], "model csv time");
      double v = to_num(row[3], "model csv nro");
      series[{row[0], row[1]}].push_back({t, v});
      by_point[{row[1], t}][row[0]] = v;
    }
    for (auto& [key, pts] : series) {
      std::sort(pts.begin(), pts.end());
      bool mono = true;
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second < pts[i - 1].second - 1e-12) mono = false;
      record(mono, "model nro nondecreasing in time for protocol=" + key.first +
                       " hops=" + key.second);
    }
    for (const auto& [pt, vals] : by_point) {
      auto a = vals.find("dsdv");
      auto b = vals.find("dsr");
      if (a == vals.end() || b == vals.end() || pt.second < 60.0) continue;
      record(a->second > b->second, "model nro dsdv > dsr at hops=" + pt.first +
                                        " time=" + format_double(pt.second));
    }
  } else {
    throw detail::ConfigError("model csv: unexpected schema");
  }

  CompareOutcome result;
  result.pass = violations.empty() && checks > 0;
  out << "checks: " << checks << ", violations: "
      << format_int(static_cast<long long>(violations.size())) << "\n";
  out << "verdict: " << (result.pass ? "PASS" : "FAIL") << "\n";
  result.text = out.str();
  return result;
}

}  // namespace adhoclab
