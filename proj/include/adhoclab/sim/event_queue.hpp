#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace adhoclab::sim {

enum class EventKind {
  packet_arrival,     // a reception lands at a node
  unicast_outcome,    // resolve success/failure of a unicast attempt
  unicast_retry,      // re-transmit a failed unicast attempt
  link_fail,          // deliver a link-failure callback to the sender
  deferred_broadcast, // jittered re-forward of a broadcast packet
  timer,              // protocol timer
  mobility_update,    // waypoint reached, redraw kinematics
  traffic_generation  // CBR source emits the next packet
};

struct Event {
  double fire_time = 0.0;
  std::uint64_t seq = 0;  // insertion counter, breaks fire_time ties FIFO
  EventKind kind = EventKind::timer;
  int node = -1;            // receiver / timer owner / traffic source
  int from = -1;            // transmitting node for packet_arrival
  int mac_dst = -1;         // unicast MAC target, -1 for broadcast
  std::uint64_t aux = 0;    // kind-specific id (pending-unicast id, timer aux)
  int timer_id = 0;
};

/* Handle for cancellation; the queue removes lazily at pop time. */
struct EventHandle {
  std::uint64_t seq = 0;
  bool valid = false;
};

class EventQueue {
 public:
  EventHandle schedule(Event e, double now) {
    if (e.fire_time < now)
      throw std::logic_error("EventQueue: cannot schedule into the past");
    e.seq = next_seq_++;
    EventHandle h{e.seq, true};
    heap_.push(e);
    return h;
  }

  void cancel(const EventHandle& h) {
    if (h.valid) cancelled_.insert(h.seq);
  }

  bool empty() {
    drop_cancelled();
    return heap_.empty();
  }

  /* precondition: !empty() */
  Event pop() {
    drop_cancelled();
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

  const Event& peek() {
    drop_cancelled();
    return heap_.top();
  }

  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  void drop_cancelled() {
    while (!heap_.empty() && cancelled_.count(heap_.top().seq)) {
      cancelled_.erase(heap_.top().seq);
      heap_.pop();
    }
  }

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace adhoclab::sim
