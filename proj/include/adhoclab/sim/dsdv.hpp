#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <adhoclab/sim/kernel.hpp>

namespace adhoclab::sim {

/* Proactive distance-vector routing with destination sequence numbers.
 * Periodic full table dumps on a desynchronized timer, incremental updates
 * after a settling delay, immediate ones when a link breaks. No send
 * buffer: data without a usable route is dropped on the spot. */
class Dsdv : public RoutingProtocol {
 public:
  static constexpr int kBrokenMetric = 1 << 20;

  void start(Simulation& sim, NodeId self) override {
    self_ = self;
    Entry e;
    e.next = self;
    e.metric = 0;
    e.seq = own_seq_;
    table_[self] = e;
    sim.schedule_timer(self_, sim.rng("dsdv").uniform(), kTimerDump);
  }

  void originate(Simulation& sim, Packet&& pkt) override {
    forward_data(sim, std::move(pkt));
  }

  void handle(Simulation& sim, Packet&& pkt, NodeId from) override {
    if (pkt.kind == PacketKind::data) {
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
      forward_data(sim, std::move(pkt));
    } else if (pkt.kind == PacketKind::dsdv_update) {
      merge(sim, pkt, from);
    }
  }

  void link_failed(Simulation& sim, NodeId dead_next_hop, Packet&& pkt) override {
    bool broke = false;
    for (auto& [dest, e] : table_) {
      if (e.next == dead_next_hop && e.metric < kBrokenMetric) {
        e.metric = kBrokenMetric;
        e.seq += 1;  // odd sequence marks a breakage owned by the detector
        changed_.insert(dest);
        broke = true;
      }
    }
    if (broke) broadcast_changes(sim);
    if (pkt.kind == PacketKind::data) sim.note_data_dropped(pkt, DropReason::link_failed);
  }

  void timer(Simulation& sim, int timer_id, std::uint64_t) override {
    if (timer_id == kTimerDump) {
      own_seq_ += 2;
      table_[self_].seq = own_seq_;
      broadcast(sim, false);
      changed_.clear();
      trig_armed_ = false;
      double period = sim.profile().periodic_update * (0.9 + 0.2 * sim.rng("dsdv").uniform());
      sim.schedule_timer(self_, period, kTimerDump);
    } else if (timer_id == kTimerTrig) {
      trig_armed_ = false;
      if (!changed_.empty()) {
        broadcast(sim, true);
        changed_.clear();
      }
    }
  }

  // introspection for tests
  NodeId next_hop(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? -1 : it->second.next;
  }
  int metric_to(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? kBrokenMetric : it->second.metric;
  }
  std::uint32_t seq_of(NodeId dest) const {
    auto it = table_.find(dest);
    return it == table_.end() ? 0 : it->second.seq;
  }
  std::size_t table_size() const { return table_.size(); }

 private:
  static constexpr int kTimerDump = 1;
  static constexpr int kTimerTrig = 2;

  struct Entry {
    NodeId next = -1;
    int metric = kBrokenMetric;
    std::uint32_t seq = 0;
  };

  void forward_data(Simulation& sim, Packet&& pkt) {
    auto it = table_.find(pkt.dst);
    if (it == table_.end() || it->second.metric >= kBrokenMetric) {
      sim.note_data_dropped(pkt, DropReason::no_route);
      return;
    }
    sim.send_unicast(self_, it->second.next, std::move(pkt));
  }

  void merge(Simulation& sim, const Packet& pkt, NodeId from) {
    bool breakage = false;
    bool settled_change = false;
    for (const DsdvAdvert& a : pkt.adverts) {
      if (a.dest == self_) {
        // a route to us circulating at or past our own sequence: outrun it
        if (a.seq_no >= own_seq_) {
          own_seq_ = a.seq_no + (a.seq_no % 2 == 0 ? 2 : 1);
          table_[self_].seq = own_seq_;
          changed_.insert(self_);
          settled_change = true;
        }
        continue;
      }
      int cand = a.metric >= kBrokenMetric ? kBrokenMetric : a.metric + 1;
      auto it = table_.find(a.dest);
      if (it == table_.end()) {
        if (cand >= kBrokenMetric) continue;  // nothing usable to learn
        Entry e;
        e.next = from;
        e.metric = cand;
        e.seq = a.seq_no;
        table_.emplace(a.dest, e);
        changed_.insert(a.dest);
        settled_change = true;
        continue;
      }
      Entry& e = it->second;
      bool take = a.seq_no > e.seq || (a.seq_no == e.seq && cand < e.metric);
      if (!take) continue;
      bool was_broken = e.metric >= kBrokenMetric;
      bool differs = e.metric != cand || e.next != from;
      e.next = from;
      e.metric = cand;
      e.seq = a.seq_no;
      if (differs) {
        changed_.insert(a.dest);
        if (!was_broken && cand >= kBrokenMetric)
          breakage = true;
        else
          settled_change = true;
      }
    }
    if (breakage) {
      broadcast_changes(sim);
    } else if (settled_change && !trig_armed_) {
      trig_armed_ = true;
      sim.schedule_timer(self_, sim.profile().settling_time, kTimerTrig);
    }
  }

  // immediate incremental update, used for breakage propagation
  void broadcast_changes(Simulation& sim) {
    broadcast(sim, true);
    changed_.clear();
  }

  void broadcast(Simulation& sim, bool delta) {
    Packet p;
    p.kind = PacketKind::dsdv_update;
    p.src = self_;
    p.ttl = 1;
    for (const auto& [dest, e] : table_) {
      if (delta && !changed_.count(dest)) continue;
      p.adverts.push_back(DsdvAdvert{dest, e.metric, e.seq});
    }
    if (p.adverts.empty()) return;
    double jitter = sim.rng("jitter").uniform() * sim.profile().forward_jitter;
    sim.send_broadcast_delayed(self_, std::move(p), jitter);
  }

  NodeId self_ = -1;
  std::map<NodeId, Entry> table_;
  std::set<NodeId> changed_;
  std::uint32_t own_seq_ = 0;
  bool trig_armed_ = false;
};

}  // namespace adhoclab::sim
