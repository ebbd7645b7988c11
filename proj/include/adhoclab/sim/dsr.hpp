#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <adhoclab/sim/kernel.hpp>

namespace adhoclab::sim {

/* Source routing with aggressive caching. Routes live in two bounded
 * pools, one fed by discovery replies and one by promiscuous taps, both
 * evicting oldest-first. Undeliverable data waits in a bounded send
 * buffer while a request flood runs with doubling retry backoff. A failed
 * hop is salvaged once from cache, then reported back to the origin. */
class Dsr : public RoutingProtocol {
 public:
  void start(Simulation&, NodeId self) override { self_ = self; }

  void originate(Simulation& sim, Packet&& pkt) override {
    std::vector<NodeId> path = route_to(pkt.dst);
    if (!path.empty()) {
      NodeId next = path[1];
      pkt.route = std::move(path);
      sim.send_unicast(self_, next, std::move(pkt));
      return;
    }
    NodeId target = pkt.dst;
    buffer_packet(sim, std::move(pkt));
    if (!discoveries_.count(target)) start_discovery(sim, target);
  }

  void handle(Simulation& sim, Packet&& pkt, NodeId from) override {
    switch (pkt.kind) {
      case PacketKind::data: on_data(sim, std::move(pkt)); break;
      case PacketKind::rreq: on_rreq(sim, std::move(pkt), from); break;
      case PacketKind::rrep: on_rrep(sim, std::move(pkt)); break;
      case PacketKind::rerr: on_rerr(sim, std::move(pkt)); break;
      default: break;
    }
  }

  /* a unicast heard on its way elsewhere reveals the rest of its source
   * route: everything downstream of the transmitter is a path from here.
   * An overheard route error names a dead link, so bystander caches shed
   * it too instead of keeping poison until they trip over it themselves. */
  void overhear(Simulation& sim, const Packet& pkt, NodeId from, NodeId) override {
    if (pkt.kind == PacketKind::rerr) {
      purge_edge(pkt.broken_from, pkt.broken_to);
      return;
    }
    if (pkt.route.empty()) return;
    auto it = std::find(pkt.route.begin(), pkt.route.end(), from);
    if (it == pkt.route.end()) return;
    /* data heard ahead of its route: this node sits later on the route than
     * the transmitter's successor, so the hops between are dead weight. A
     * gratuitous reply hands the origin the shortcut. Held off per flow so
     * one busy stream doesn't turn every overhearing into a reply. */
    if (pkt.kind == PacketKind::data) {
      auto me = std::find(it + 1, pkt.route.end(), self_);
      if (me != pkt.route.end() && me > it + 1) {
        auto key = std::make_pair(pkt.route.front(), pkt.dst);
        double& last = grat_sent_[key];
        if (last == 0.0 || sim.now() - last >= kGratHoldoff) {
          last = sim.now();
          std::vector<NodeId> shortcut(pkt.route.begin(), it + 1);
          shortcut.insert(shortcut.end(), me, pkt.route.end());
          if (loop_free(shortcut)) send_rrep(sim, std::move(shortcut));
        }
      }
    }
    std::vector<NodeId> path;
    path.push_back(self_);
    path.insert(path.end(), it, pkt.route.end());
    if (path.size() < 2 || !loop_free(path)) return;
    cache_insert(tap_pool_, static_cast<std::size_t>(sim.profile().tap_cache_size),
                 std::move(path), sim.now());
  }

  void link_failed(Simulation& sim, NodeId dead_next_hop, Packet&& pkt) override {
    purge_edge(self_, dead_next_hop);
    if (pkt.kind != PacketKind::data) return;  // rrep/rerr die quietly

    // tell the origin which link is gone so its caches shed stale routes
    auto self_pos = std::find(pkt.route.begin(), pkt.route.end(), self_);
    if (pkt.src != self_ && self_pos != pkt.route.end() && self_pos != pkt.route.begin()) {
      Packet err;
      err.kind = PacketKind::rerr;
      err.src = self_;
      err.dst = pkt.src;
      err.broken_from = self_;
      err.broken_to = dead_next_hop;
      err.route.assign(pkt.route.begin(), self_pos + 1);
      std::reverse(err.route.begin(), err.route.end());
      NodeId next = err.route[1];
      sim.send_unicast(self_, next, std::move(err));
    }

    if (pkt.salvage_count < 1) {
      std::vector<NodeId> alt = route_to(pkt.dst);
      if (!alt.empty()) {
        ++pkt.salvage_count;
        NodeId next = alt[1];
        pkt.route = std::move(alt);
        sim.send_unicast(self_, next, std::move(pkt));
        return;
      }
      sim.note_data_dropped(pkt, DropReason::link_failed);
    } else {
      sim.note_data_dropped(pkt, DropReason::salvage_exhausted);
    }
  }

  void timer(Simulation& sim, int timer_id, std::uint64_t aux) override {
    if (timer_id == kTimerBuf) {
      for (std::size_t i = 0; i < buffer_.size(); ++i) {
        if (buffer_[i].pkt.uid == aux) {
          sim.note_data_dropped(buffer_[i].pkt, DropReason::buffer_timeout);
          buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    } else if (timer_id == kTimerDisc) {
      NodeId target = static_cast<NodeId>(aux);
      auto it = discoveries_.find(target);
      if (it == discoveries_.end()) return;
      if (!has_buffered(target)) {
        discoveries_.erase(it);
        return;
      }
      Disc& d = it->second;
      d.backoff = std::min(d.backoff * 2.0, sim.profile().discovery_backoff_cap);
      send_rreq(sim, target);
      d.retry = sim.schedule_timer(self_, d.backoff, kTimerDisc,
                                   static_cast<std::uint64_t>(target));
    }
  }

  /* best cached path from this node to dst: freshest, then fewest hops;
   * empty when neither pool has one. Freshness first because overheard
   * traffic is the only live topology signal this protocol gets, and a
   * short path recorded a minute ago is usually a broken one. */
  std::vector<NodeId> route_to(NodeId dst) const {
    const CachedPath* best = nullptr;
    std::size_t best_len = 0;
    for (const auto* pool : {&disc_pool_, &tap_pool_}) {
      for (const CachedPath& c : *pool) {
        auto it = std::find(c.path.begin() + 1, c.path.end(), dst);
        if (it == c.path.end()) continue;
        std::size_t len = static_cast<std::size_t>(it - c.path.begin()) + 1;
        if (!best || c.time > best->time || (c.time == best->time && len < best_len)) {
          best = &c;
          best_len = len;
        }
      }
    }
    if (!best) return {};
    return std::vector<NodeId>(best->path.begin(),
                               best->path.begin() + static_cast<std::ptrdiff_t>(best_len));
  }

  // introspection for tests
  std::size_t discovery_pool_size() const { return disc_pool_.size(); }
  std::size_t tap_pool_size() const { return tap_pool_.size(); }
  std::size_t buffered_count() const { return buffer_.size(); }

 private:
  static constexpr int kTimerBuf = 1;
  static constexpr int kTimerDisc = 2;
  static constexpr int kFloodTtl = 64;
  static constexpr double kGratHoldoff = 1.0;

  struct CachedPath {
    std::vector<NodeId> path;  // starts at the owning node
    double time = 0.0;
  };

  struct Buffered {
    Packet pkt;
    EventHandle timer;
  };

  struct Disc {
    double backoff = 0.0;
    EventHandle retry;
  };

  static bool loop_free(const std::vector<NodeId>& path) {
    std::set<NodeId> seen(path.begin(), path.end());
    return seen.size() == path.size();
  }

  void on_data(Simulation& sim, Packet&& pkt) {
    if (pkt.dst == self_) {
      sim.note_data_delivered(pkt);
      return;
    }
    auto it = std::find(pkt.route.begin(), pkt.route.end(), self_);
    if (it == pkt.route.end() || it + 1 == pkt.route.end()) {
      sim.note_data_dropped(pkt, DropReason::no_route);
      return;
    }
    if (pkt.ttl <= 0) {
      sim.note_data_dropped(pkt, DropReason::ttl_expired);
      return;
    }
    --pkt.ttl;
    ++pkt.hop_count;
    NodeId next = *(it + 1);
    sim.send_unicast(self_, next, std::move(pkt));
  }

  void on_rreq(Simulation& sim, Packet&& pkt, NodeId) {
    if (pkt.src == self_) return;
    if (std::find(pkt.route.begin(), pkt.route.end(), self_) != pkt.route.end()) return;

    if (pkt.dst == self_) {
      // target answers every loop-free copy so the origin learns options
      std::vector<NodeId> full = pkt.route;
      full.push_back(self_);
      std::vector<NodeId> back(full.rbegin(), full.rend());
      cache_insert(tap_pool_, static_cast<std::size_t>(sim.profile().tap_cache_size),
                   std::move(back), sim.now());
      send_rrep(sim, std::move(full));
      return;
    }

    auto key = std::make_pair(pkt.src, pkt.req_id);
    if (seen_.count(key)) return;
    seen_.insert(key);

    // answer from cache when possible instead of widening the flood
    std::vector<NodeId> tail = route_to(pkt.dst);
    if (!tail.empty()) {
      std::vector<NodeId> full = pkt.route;
      full.push_back(self_);
      full.insert(full.end(), tail.begin() + 1, tail.end());
      if (loop_free(full)) {
        send_rrep(sim, std::move(full));
        return;
      }
    }

    if (pkt.ttl <= 1) return;
    --pkt.ttl;
    pkt.route.push_back(self_);
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(pkt), jitter);
  }

  // route holds the forward path origin..target; the reply walks it backward
  // from wherever the replier sits (the end for targets, mid-path for
  // cache-spliced replies)
  void send_rrep(Simulation& sim, std::vector<NodeId>&& full) {
    Packet r;
    r.kind = PacketKind::rrep;
    r.src = self_;
    r.dst = full.front();
    auto me = std::find(full.begin(), full.end(), self_);
    std::size_t idx = static_cast<std::size_t>(me - full.begin());
    r.route = std::move(full);
    NodeId next = r.route[idx - 1];
    sim.send_unicast(self_, next, std::move(r));
  }

  void on_rrep(Simulation& sim, Packet&& pkt) {
    auto it = std::find(pkt.route.begin(), pkt.route.end(), self_);
    if (it == pkt.route.end()) return;
    std::size_t idx = static_cast<std::size_t>(it - pkt.route.begin());
    if (idx == 0) {
      NodeId target = pkt.route.back();
      cache_insert(disc_pool_, static_cast<std::size_t>(sim.profile().discovery_cache_size),
                   std::move(pkt.route), sim.now());
      auto d = discoveries_.find(target);
      if (d != discoveries_.end()) {
        sim.cancel_timer(d->second.retry);
        discoveries_.erase(d);
      }
      flush_buffer(sim);
      return;
    }
    std::vector<NodeId> suffix(pkt.route.begin() + static_cast<std::ptrdiff_t>(idx),
                               pkt.route.end());
    cache_insert(tap_pool_, static_cast<std::size_t>(sim.profile().tap_cache_size),
                 std::move(suffix), sim.now());
    NodeId next = pkt.route[idx - 1];
    sim.send_unicast(self_, next, std::move(pkt));
  }

  void on_rerr(Simulation& sim, Packet&& pkt) {
    purge_edge(pkt.broken_from, pkt.broken_to);
    if (pkt.dst == self_) return;
    auto it = std::find(pkt.route.begin(), pkt.route.end(), self_);
    if (it == pkt.route.end() || it + 1 == pkt.route.end()) return;
    NodeId next = *(it + 1);
    sim.send_unicast(self_, next, std::move(pkt));
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

  void start_discovery(Simulation& sim, NodeId target) {
    Disc d;
    d.backoff = sim.profile().discovery_backoff;
    send_rreq(sim, target);
    d.retry = sim.schedule_timer(self_, d.backoff, kTimerDisc,
                                 static_cast<std::uint64_t>(target));
    discoveries_.emplace(target, std::move(d));
  }

  void send_rreq(Simulation& sim, NodeId target) {
    Packet q;
    q.kind = PacketKind::rreq;
    q.src = self_;
    q.dst = target;
    q.ttl = kFloodTtl;
    q.req_id = ++req_counter_;
    q.route.push_back(self_);
    sim.send_broadcast(self_, std::move(q));
  }

  void flush_buffer(Simulation& sim) {
    std::vector<Buffered> ready;
    for (std::size_t i = 0; i < buffer_.size();) {
      std::vector<NodeId> path = route_to(buffer_[i].pkt.dst);
      if (path.empty()) {
        ++i;
        continue;
      }
      sim.cancel_timer(buffer_[i].timer);
      buffer_[i].pkt.route = std::move(path);
      ready.push_back(std::move(buffer_[i]));
      buffer_.erase(buffer_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    for (Buffered& b : ready) {
      NodeId next = b.pkt.route[1];
      sim.send_unicast(self_, next, std::move(b.pkt));
    }
  }

  void purge_edge(NodeId a, NodeId b) {
    auto broken = [a, b](const CachedPath& c) {
      for (std::size_t i = 0; i + 1 < c.path.size(); ++i)
        if (c.path[i] == a && c.path[i + 1] == b) return true;
      return false;
    };
    for (auto* pool : {&disc_pool_, &tap_pool_}) {
      pool->erase(std::remove_if(pool->begin(), pool->end(), broken), pool->end());
    }
  }

  static void cache_insert(std::vector<CachedPath>& pool, std::size_t cap,
                           std::vector<NodeId>&& path, double now) {
    for (CachedPath& c : pool) {
      if (c.path == path) {
        c.time = now;
        return;
      }
    }
    if (pool.size() >= cap) {
      std::size_t oldest = 0;
      for (std::size_t i = 1; i < pool.size(); ++i)
        if (pool[i].time < pool[oldest].time) oldest = i;
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(oldest));
    }
    pool.push_back(CachedPath{std::move(path), now});
  }

  NodeId self_ = -1;
  std::vector<CachedPath> disc_pool_;
  std::vector<CachedPath> tap_pool_;
  std::deque<Buffered> buffer_;
  std::map<NodeId, Disc> discoveries_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_;
  std::map<std::pair<NodeId, NodeId>, double> grat_sent_;
  std::uint32_t req_counter_ = 0;
};

}  // namespace adhoclab::sim
