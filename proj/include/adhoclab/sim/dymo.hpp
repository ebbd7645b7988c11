#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include <adhoclab/sim/kernel.hpp>

namespace adhoclab::sim {

/* Reactive hop-by-hop routing with sequence-numbered table entries,
 * expanding-ring discovery and hello-based neighbor tracking. When every
 * ring comes back empty the destination is blacklisted for a holdoff
 * window and traffic to it is shed without new floods. */
class Dymo : public RoutingProtocol {
 public:
  /* ring ttls: odd steps up to the net diameter, the diameter itself,
   * then the configured number of repeats at full width */
  static std::vector<int> ers_ladder(const ProtocolProfile& prof) {
    std::vector<int> ttls;
    for (int t = 1; t < prof.ttl_net_diameter; t += 2) ttls.push_back(t);
    ttls.push_back(prof.ttl_net_diameter);
    for (int i = 0; i < prof.terminal_retries; ++i) ttls.push_back(prof.ttl_net_diameter);
    return ttls;
  }

  void start(Simulation& sim, NodeId self) override {
    self_ = self;
    ladder_ = ers_ladder(sim.profile());
    sim.schedule_timer(self_, sim.rng("hello").uniform(), kTimerHello);
  }

  void originate(Simulation& sim, Packet&& pkt) override {
    NodeId nh = lookup(sim, pkt.dst);
    if (nh >= 0) {
      sim.send_unicast(self_, nh, std::move(pkt));
      return;
    }
    stash_and_discover(sim, std::move(pkt));
  }

  void handle(Simulation& sim, Packet&& pkt, NodeId from) override {
    note_neighbor(sim, from);
    switch (pkt.kind) {
      case PacketKind::data: on_data(sim, std::move(pkt)); break;
      case PacketKind::rreq: on_rreq(sim, std::move(pkt), from); break;
      case PacketKind::rrep: on_rrep(sim, std::move(pkt), from); break;
      case PacketKind::rerr: on_rerr(sim, std::move(pkt), from); break;
      case PacketKind::hello: break;  // note_neighbor above is the payload
      default: break;
    }
  }

  void overhear(Simulation& sim, const Packet&, NodeId from, NodeId) override {
    note_neighbor(sim, from);
  }

  void link_failed(Simulation& sim, NodeId dead_next_hop, Packet&& pkt) override {
    neighbor_lost(sim, dead_next_hop);
    if (pkt.kind != PacketKind::data) return;
    NodeId nh = lookup(sim, pkt.dst);
    if (nh >= 0) {
      sim.send_unicast(self_, nh, std::move(pkt));
      return;
    }
    if (pkt.src == self_) {
      stash_and_discover(sim, std::move(pkt));
      return;
    }
    sim.note_data_dropped(pkt, DropReason::link_failed);
  }

  void timer(Simulation& sim, int timer_id, std::uint64_t aux) override {
    if (timer_id == kTimerHello) {
      sweep_neighbors(sim);
      Packet h;
      h.kind = PacketKind::hello;
      h.src = self_;
      h.ttl = 1;
      sim.send_broadcast(self_, std::move(h));
      // small symmetric jitter keeps pairs of nodes from colliding forever
      double next = sim.profile().hello_interval + (sim.rng("hello").uniform() - 0.5) * 0.04;
      sim.schedule_timer(self_, next, kTimerHello);
    } else if (timer_id == kTimerDisc) {
      on_discovery_timer(sim, static_cast<NodeId>(aux));
    } else if (timer_id == kTimerBuf) {
      for (std::size_t i = 0; i < buffer_.size(); ++i) {
        if (buffer_[i].pkt.uid == aux) {
          sim.note_data_dropped(buffer_[i].pkt, DropReason::buffer_timeout);
          buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    }
  }

  // introspection for tests
  bool is_neighbor(NodeId n) const { return neighbors_.count(n) != 0; }
  NodeId route_next(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? -1 : it->second.next;
  }
  int route_hops(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? -1 : it->second.hops;
  }
  std::size_t buffered_count() const { return buffer_.size(); }

 private:
  static constexpr int kTimerHello = 1;
  static constexpr int kTimerDisc = 2;
  static constexpr int kTimerBuf = 3;

  struct Route {
    NodeId next = -1;
    std::uint32_t seq = 0;
    int hops = 0;
    double expiry = 0.0;
  };

  struct Buffered {
    Packet pkt;
    EventHandle timer;
  };

  struct Disc {
    std::size_t stage = 0;
    EventHandle timer;
  };

  double dead_after(Simulation& sim) const {
    return 2.0 * sim.profile().hello_interval + 0.1;
  }

  void note_neighbor(Simulation& sim, NodeId from) { neighbors_[from] = sim.now(); }

  /* fresher sequence wins; same sequence takes fewer hops; an expired
   * entry yields to anything */
  bool install(Simulation& sim, NodeId dest, NodeId next, std::uint32_t seq, int hops) {
    double expiry = sim.now() + sim.profile().route_lifetime;
    auto it = table_.find(dest);
    if (it == table_.end()) {
      table_.emplace(dest, Route{next, seq, hops, expiry});
      return true;
    }
    Route& r = it->second;
    bool better = seq > r.seq || (seq == r.seq && hops < r.hops);
    if (better || r.expiry <= sim.now()) {
      r = Route{next, seq, hops, expiry};
      return true;
    }
    if (seq == r.seq && hops == r.hops && next == r.next) r.expiry = expiry;
    return false;
  }

  NodeId lookup(Simulation& sim, NodeId dst) {
    auto it = table_.find(dst);
    if (it != table_.end() && it->second.expiry > sim.now()) {
      it->second.expiry = sim.now() + sim.profile().route_lifetime;  // touch on use
      return it->second.next;
    }
    auto nb = neighbors_.find(dst);
    if (nb != neighbors_.end() && sim.now() - nb->second <= dead_after(sim)) return dst;
    return -1;
  }

  void on_data(Simulation& sim, Packet&& pkt) {
    if (pkt.dst == self_) {
      sim.note_data_delivered(pkt);
      return;
    }
    if (pkt.ttl <= 0) {
      sim.note_data_dropped(pkt, DropReason::ttl_expired);
      return;
    }
    --pkt.ttl;
    ++pkt.hop_count;
    NodeId nh = lookup(sim, pkt.dst);
    if (nh >= 0) {
      sim.send_unicast(self_, nh, std::move(pkt));
      return;
    }
    // no way forward: shed the packet and warn the upstream side
    Packet err;
    err.kind = PacketKind::rerr;
    err.src = self_;
    err.ttl = sim.profile().ttl_net_diameter;
    auto known = table_.find(pkt.dst);
    err.unreachable.push_back(RerrEntry{pkt.dst, known == table_.end() ? 0 : known->second.seq});
    sim.note_data_dropped(pkt, DropReason::no_route);
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(err), jitter);
  }

  void on_rreq(Simulation& sim, Packet&& pkt, NodeId from) {
    if (pkt.src == self_) return;
    bool improved = install(sim, pkt.src, from, pkt.seq_no, pkt.hop_count + 1);
    if (pkt.dst == self_) {
      if (!improved) return;
      Packet r;
      r.kind = PacketKind::rrep;
      r.src = self_;
      r.dst = pkt.src;
      r.seq_no = ++own_seq_;
      r.hop_count = 0;
      NodeId nh = lookup(sim, pkt.src);
      if (nh >= 0) sim.send_unicast(self_, nh, std::move(r));
      return;
    }
    if (!improved || pkt.ttl <= 1) return;
    --pkt.ttl;
    ++pkt.hop_count;
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(pkt), jitter);
  }

  void on_rrep(Simulation& sim, Packet&& pkt, NodeId from) {
    if (pkt.src == self_) return;
    install(sim, pkt.src, from, pkt.seq_no, pkt.hop_count + 1);
    if (pkt.dst == self_) {
      finish_discovery(sim, pkt.src);
      return;
    }
    NodeId nh = lookup(sim, pkt.dst);
    if (nh < 0) return;  // reverse path evaporated; origin will retry
    ++pkt.hop_count;
    sim.send_unicast(self_, nh, std::move(pkt));
  }

  void on_rerr(Simulation& sim, Packet&& pkt, NodeId from) {
    std::vector<RerrEntry> mine;
    for (const RerrEntry& u : pkt.unreachable) {
      if (u.dest == self_) continue;
      auto it = table_.find(u.dest);
      if (it != table_.end() && it->second.next == from) {
        table_.erase(it);
        mine.push_back(u);
      }
    }
    if (mine.empty() || pkt.ttl <= 1) return;
    Packet fwd;
    fwd.kind = PacketKind::rerr;
    fwd.src = self_;
    fwd.ttl = pkt.ttl - 1;
    fwd.unreachable = std::move(mine);
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(fwd), jitter);
  }

  void neighbor_lost(Simulation& sim, NodeId n) {
    neighbors_.erase(n);
    std::vector<RerrEntry> gone;
    for (auto it = table_.begin(); it != table_.end();) {
      if (it->second.next == n) {
        gone.push_back(RerrEntry{it->first, it->second.seq});
        it = table_.erase(it);
      } else {
        ++it;
      }
    }
    if (gone.empty()) return;
    Packet err;
    err.kind = PacketKind::rerr;
    err.src = self_;
    err.ttl = sim.profile().ttl_net_diameter;
    err.unreachable = std::move(gone);
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(err), jitter);
  }

  void sweep_neighbors(Simulation& sim) {
    std::vector<NodeId> dead;
    for (const auto& [n, last] : neighbors_)
      if (sim.now() - last > dead_after(sim)) dead.push_back(n);
    for (NodeId n : dead) neighbor_lost(sim, n);
  }

  void stash_and_discover(Simulation& sim, Packet&& pkt) {
    NodeId target = pkt.dst;
    auto g = give_up_.find(target);
    if (g != give_up_.end()) {
      if (sim.now() - g->second < sim.profile().giveup_holdoff) {
        sim.note_data_dropped(pkt, DropReason::holdoff);
        return;
      }
      give_up_.erase(g);
    }
    buffer_packet(sim, std::move(pkt));
    if (discoveries_.count(target)) return;
    Disc d;
    d.stage = 0;
    send_rreq(sim, target, 0);
    d.timer = sim.schedule_timer(self_, sim.profile().rreq_wait_time, kTimerDisc,
                                 static_cast<std::uint64_t>(target));
    discoveries_.emplace(target, d);
  }

  void send_rreq(Simulation& sim, NodeId target, std::size_t stage) {
    Packet q;
    q.kind = PacketKind::rreq;
    q.src = self_;
    q.dst = target;
    q.seq_no = ++own_seq_;
    q.req_id = ++req_counter_;
    q.hop_count = 0;
    q.ttl = ladder_[stage];
    sim.send_broadcast(self_, std::move(q));
  }

  void on_discovery_timer(Simulation& sim, NodeId target) {
    auto it = discoveries_.find(target);
    if (it == discoveries_.end()) return;
    if (!has_buffered(target)) {
      discoveries_.erase(it);
      return;
    }
    Disc& d = it->second;
    ++d.stage;
    if (d.stage >= ladder_.size()) {
      give_up_[target] = sim.now();
      discoveries_.erase(it);
      drop_buffered(sim, target);
      return;
    }
    send_rreq(sim, target, d.stage);
    d.timer = sim.schedule_timer(self_, sim.profile().rreq_wait_time, kTimerDisc,
                                 static_cast<std::uint64_t>(target));
  }

  void finish_discovery(Simulation& sim, NodeId target) {
    auto it = discoveries_.find(target);
    if (it != discoveries_.end()) {
      sim.cancel_timer(it->second.timer);
      discoveries_.erase(it);
    }
    give_up_.erase(target);
    flush_buffer(sim);
  }

  void buffer_packet(Simulation& sim, Packet&& pkt) {
    if (buffer_.size() >= static_cast<std::size_t>(sim.profile().send_buf_size)) {
      Buffered& oldest = buffer_.front();
      sim.note_data_dropped(oldest.pkt, DropReason::buffer_overflow);
      sim.cancel_timer(oldest.timer);
      buffer_.pop_front();
    }
    Buffered b;
    std::uint64_t uid = pkt.uid;
    b.pkt = std::move(pkt);
    b.timer = sim.schedule_timer(self_, sim.profile().buffer_lifetime, kTimerBuf, uid);
    buffer_.push_back(std::move(b));
  }

  bool has_buffered(NodeId dst) const {
    for (const Buffered& b : buffer_)
      if (b.pkt.dst == dst) return true;
    return false;
  }

  void drop_buffered(Simulation& sim, NodeId dst) {
    for (std::size_t i = 0; i < buffer_.size();) {
      if (buffer_[i].pkt.dst == dst) {
        sim.note_data_dropped(buffer_[i].pkt, DropReason::discovery_failed);
        sim.cancel_timer(buffer_[i].timer);
        buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }

  void flush_buffer(Simulation& sim) {
    std::vector<Buffered> ready;
    for (std::size_t i = 0; i < buffer_.size();) {
      NodeId nh = lookup(sim, buffer_[i].pkt.dst);
      if (nh < 0) {
        ++i;
        continue;
      }
      sim.cancel_timer(buffer_[i].timer);
      ready.push_back(std::move(buffer_[i]));
      buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    for (Buffered& b : ready) {
      NodeId nh = lookup(sim, b.pkt.dst);
      if (nh >= 0)
        sim.send_unicast(self_, nh, std::move(b.pkt));
      else
        sim.note_data_dropped(b.pkt, DropReason::no_route);
    }
  }

  NodeId self_ = -1;
  std::vector<int> ladder_;
  std::map<NodeId, Route> table_;
  std::map<NodeId, double> neighbors_;
  std::deque<Buffered> buffer_;
  std::map<NodeId, Disc> discoveries_;
  std::map<NodeId, double> give_up_;
  std::uint32_t own_seq_ = 0;
  std::uint32_t req_counter_ = 0;
};

}  // namespace adhoclab::sim
