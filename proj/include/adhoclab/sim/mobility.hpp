#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <adhoclab/sim/packet.hpp>
#include <adhoclab/sim/radio.hpp>
#include <adhoclab/sim/rng.hpp>

namespace adhoclab::sim {

enum class MobilityModel { rwp, road, static_layout, trace };

struct MobilityConfig {
  MobilityModel model = MobilityModel::rwp;
  double width = 1000.0;      // rwp area, meters
  double height = 1000.0;
  double road_length = 10000.0;
  double speed = 11.11;       // mean speed, meters/second
  double pause_time = 0.0;    // rwp dwell at waypoints
  double lambda = 0.001;      // road: vehicles per meter per direction
  double sigma = 0.0;         // road: speed std-dev, 0 = constant
  double lane_gap = 5.0;      // road: lateral offset between directions
  std::vector<Vec2> positions;  // static layout, optional explicit placement
  std::string trace_file;

  void validate() const {
    if (!(speed > 0.0)) throw std::domain_error("mobility: speed must be > 0");
    if (lambda < 0.0) throw std::domain_error("mobility: lambda must be >= 0");
    if (!(width > 0.0) || !(height > 0.0))
      throw std::domain_error("mobility: area dimensions must be > 0");
    if (!(road_length > 0.0)) throw std::domain_error("mobility: road_length must be > 0");
    if (pause_time < 0.0) throw std::domain_error("mobility: pause_time must be >= 0");
    if (sigma < 0.0) throw std::domain_error("mobility: sigma must be >= 0");
  }
};

/* One vehicle placed by the Poisson road process. */
struct RoadNode {
  double x = 0.0;
  int direction = 1;  // +1 or -1 along the road axis
  double speed = 0.0;
};

/* Lays vehicles down per direction with exponential gaps of mean 1/lambda,
 * i.e. a Poisson process of rate lambda along the road. Node counts vary by
 * seed; the simulator conditions on a fixed count instead (see Mobility). */
inline std::vector<RoadNode> road_init(const MobilityConfig& cfg, RngStream& rng) {
  cfg.validate();
  std::vector<RoadNode> out;
  if (cfg.lambda == 0.0) return out;
  for (int dir : {+1, -1}) {
    double x = rng.exponential(1.0 / cfg.lambda);
    while (x < cfg.road_length) {
      double s = cfg.speed;
      if (cfg.sigma > 0.0) {
        do {
          s = rng.normal(cfg.speed, cfg.sigma);
        } while (s <= 0.0);
      }
      out.push_back(RoadNode{x, dir, s});
      x += rng.exponential(1.0 / cfg.lambda);
    }
  }
  return out;
}

/* Advances a road node by dt, wrapping modulo the road length (torus). */
inline double road_step(double x, int direction, double node_speed, double dt,
                        const MobilityConfig& cfg) {
  if (!(dt > 0.0)) throw std::domain_error("road_step: dt must be > 0");
  double nx = std::fmod(x + direction * node_speed * dt, cfg.road_length);
  if (nx < 0.0) nx += cfg.road_length;
  return nx;
}

namespace detail {

struct TraceRecord {
  double t;
  Vec2 pos;
};

}  // namespace detail

/* Per-run trajectory provider. Positions are computed lazily from kinematic
 * state; only the random-waypoint model needs change events (redraws consume
 * randomness), the other models are piecewise-defined for all time. */
class Mobility {
 public:
  Mobility(const MobilityConfig& cfg, int node_count, RngStream rng)
      : cfg_(cfg), rng_(std::move(rng)) {
    cfg_.validate();
    if (node_count <= 0) throw std::domain_error("mobility: node_count must be > 0");
    states_.resize(node_count);
    switch (cfg_.model) {
      case MobilityModel::rwp: init_rwp(); break;
      case MobilityModel::road: init_road(); break;
      case MobilityModel::static_layout: init_static(); break;
      case MobilityModel::trace: init_trace(); break;
    }
  }

  int node_count() const { return static_cast<int>(states_.size()); }

  Vec2 position(NodeId n, double now) const {
    const State& st = states_[n];
    switch (cfg_.model) {
      case MobilityModel::road: {
        double x = std::fmod(st.base.x + st.vel.x * (now - st.t0), cfg_.road_length);
        if (x < 0.0) x += cfg_.road_length;
        return Vec2{x, st.base.y};
      }
      case MobilityModel::trace:
        return trace_position(n, now);
      default: {
        double dt = now - st.t0;
        return Vec2{st.base.x + st.vel.x * dt, st.base.y + st.vel.y * dt};
      }
    }
  }

  /* torus distance along the road axis for the road model, plain euclidean
   * otherwise */
  double distance(NodeId a, NodeId b, double now) const {
    Vec2 pa = position(a, now), pb = position(b, now);
    if (cfg_.model == MobilityModel::road) {
      double dx = std::fabs(pa.x - pb.x);
      dx = std::min(dx, cfg_.road_length - dx);
      return std::hypot(dx, pa.y - pb.y);
    }
    return euclidean_distance(pa, pb);
  }

  /* next time node n's kinematics change; +inf when they never do */
  double next_change(NodeId n) const { return states_[n].until; }

  /* cross the change point at time t: waypoint arrival starts a pause,
   * pause end draws the next leg */
  void apply_change(NodeId n, double t) {
    State& st = states_[n];
    if (cfg_.model != MobilityModel::rwp || st.until == kNever) return;
    st.base = position(n, st.until);
    st.t0 = st.until;
    if (!st.paused && cfg_.pause_time > 0.0) {
      st.paused = true;
      st.vel = Vec2{0.0, 0.0};
      st.until = st.t0 + cfg_.pause_time;
    } else {
      st.paused = false;
      start_leg(st);
    }
    (void)t;
  }

  const MobilityConfig& config() const { return cfg_; }

  /* road model inspection for tests */
  int road_direction(NodeId n) const { return states_[n].vel.x >= 0.0 ? +1 : -1; }

 private:
  static constexpr double kNever = std::numeric_limits<double>::infinity();

  struct State {
    Vec2 base;
    Vec2 vel;
    double t0 = 0.0;
    double until = kNever;
    bool paused = false;
  };

  void init_rwp() {
    for (State& st : states_) {
      st.base = Vec2{rng_.uniform(0.0, cfg_.width), rng_.uniform(0.0, cfg_.height)};
      st.t0 = 0.0;
      start_leg(st);
    }
  }

  void start_leg(State& st) {
    const Vec2 wp{rng_.uniform(0.0, cfg_.width), rng_.uniform(0.0, cfg_.height)};
    const double speed = cfg_.speed * rng_.uniform(0.9, 1.1);
    const double dist = euclidean_distance(st.base, wp);
    if (dist < 1e-9) {
      st.vel = Vec2{0.0, 0.0};
      st.until = st.t0 + 1e-3;  // degenerate waypoint, redraw almost at once
      return;
    }
    st.vel = Vec2{(wp.x - st.base.x) / dist * speed, (wp.y - st.base.y) / dist * speed};
    st.until = st.t0 + dist / speed;
  }

  /* Fixed node count: uniform iid positions (the Poisson process conditioned
   * on its count), alternating directions, Gaussian speeds when sigma > 0. */
  void init_road() {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      State& st = states_[i];
      const int dir = (i % 2 == 0) ? +1 : -1;
      double s = cfg_.speed;
      if (cfg_.sigma > 0.0) {
        do {
          s = rng_.normal(cfg_.speed, cfg_.sigma);
        } while (s <= 0.0);
      }
      st.base = Vec2{rng_.uniform(0.0, cfg_.road_length), dir > 0 ? 0.0 : cfg_.lane_gap};
      st.vel = Vec2{dir * s, 0.0};
      st.t0 = 0.0;
      st.until = kNever;
    }
  }

  void init_static() {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      State& st = states_[i];
      if (i < cfg_.positions.size()) {
        st.base = cfg_.positions[i];
      } else {
        // compact default grid, everything within one radio cell
        st.base = Vec2{static_cast<double>(i % 5) * 50.0,
                       static_cast<double>(i / 5) * 50.0};
      }
      st.vel = Vec2{0.0, 0.0};
      st.until = kNever;
    }
  }

  void init_trace() {
    if (cfg_.trace_file.empty())
      throw std::domain_error("mobility: trace model requires trace_file");
    std::ifstream in(cfg_.trace_file);
    if (!in) throw std::runtime_error("mobility: cannot open trace file " + cfg_.trace_file);
    traces_.assign(states_.size(), {});
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      double t, x, y;
      int node;
      if (!(ss >> t >> node >> x >> y))
        throw std::runtime_error("mobility: bad trace record at line " +
                                 std::to_string(lineno));
      if (node < 0 || node >= static_cast<int>(states_.size()))
        throw std::runtime_error("mobility: trace node id out of range at line " +
                                 std::to_string(lineno));
      auto& tr = traces_[node];
      if (!tr.empty() && t < tr.back().t)
        throw std::runtime_error("mobility: trace times decrease at line " +
                                 std::to_string(lineno));
      tr.push_back(detail::TraceRecord{t, Vec2{x, y}});
    }
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      if (traces_[i].empty())
        throw std::runtime_error("mobility: trace has no records for node " +
                                 std::to_string(i));
      states_[i].base = traces_[i].front().pos;
      states_[i].until = kNever;
    }
  }

  Vec2 trace_position(NodeId n, double now) const {
    const auto& tr = traces_[n];
    if (now <= tr.front().t) return tr.front().pos;
    if (now >= tr.back().t) return tr.back().pos;
    auto it = std::upper_bound(tr.begin(), tr.end(), now,
                               [](double t, const detail::TraceRecord& r) { return t < r.t; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.t == lo.t) return hi.pos;
    const double f = (now - lo.t) / (hi.t - lo.t);
    return Vec2{lo.pos.x + f * (hi.pos.x - lo.pos.x), lo.pos.y + f * (hi.pos.y - lo.pos.y)};
  }

  MobilityConfig cfg_;
  RngStream rng_;
  std::vector<State> states_;
  std::vector<std::vector<detail::TraceRecord>> traces_;
};

}  // namespace adhoclab::sim
