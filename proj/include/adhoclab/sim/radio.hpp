#pragma once

#include <cmath>
#include <stdexcept>

namespace adhoclab::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double euclidean_distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/* Unit-disk reduction of a fixed-power two-ray-ground radio: reception
 * succeeds exactly within `range`. Collisions are declared when two
 * receptions overlap strictly within collision_window at the same receiver.
 * Each node is half-duplex: its frames serialize at tx_serialize spacing, so
 * a burst handed down in one instant still leaves the antenna one frame at a
 * time (and, arriving spaced wider than the collision window, survives). */
struct RadioModel {
  double range = 250.0;
  double collision_window = 0.002;
  double per_hop_latency = 0.002;
  double tx_serialize = 0.004;  // per-frame transmitter occupancy
  int retry_limit = 4;  // total transmission attempts per unicast
  double retry_backoff = 0.005;
  double loss_prob = 0.0;  // per-receiver independent loss, MAC abstraction

  void validate() const {
    if (!(range > 0.0)) throw std::domain_error("radio: range must be > 0");
    if (retry_limit < 1) throw std::domain_error("radio: retry_limit must be >= 1");
    if (!(per_hop_latency > 0.0)) throw std::domain_error("radio: per_hop_latency must be > 0");
    if (collision_window < 0.0) throw std::domain_error("radio: collision_window must be >= 0");
    if (tx_serialize < 0.0) throw std::domain_error("radio: tx_serialize must be >= 0");
    if (retry_backoff < 0.0) throw std::domain_error("radio: retry_backoff must be >= 0");
    if (loss_prob < 0.0 || loss_prob >= 1.0)
      throw std::domain_error("radio: loss_prob must be in [0, 1)");
  }
};

inline bool in_range(const Vec2& a, const Vec2& b, const RadioModel& radio) {
  return euclidean_distance(a, b) <= radio.range;
}

}  // namespace adhoclab::sim
