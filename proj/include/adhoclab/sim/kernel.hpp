#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <adhoclab/metrics.hpp>
#include <adhoclab/scenario.hpp>
#include <adhoclab/sim/event_queue.hpp>
#include <adhoclab/sim/mobility.hpp>
#include <adhoclab/sim/packet.hpp>
#include <adhoclab/sim/profile.hpp>
#include <adhoclab/sim/rng.hpp>

namespace adhoclab::sim {

class Simulation;

/* One instance per node. All callbacks run single-threaded in event order;
 * protocols may only observe the network through these entry points. */
class RoutingProtocol {
 public:
  virtual ~RoutingProtocol() = default;
  virtual void start(Simulation& sim, NodeId self) = 0;
  // locally originated data packet
  virtual void originate(Simulation& sim, Packet&& pkt) = 0;
  // packet addressed to this node (broadcast, or unicast MAC-targeted here)
  virtual void handle(Simulation& sim, Packet&& pkt, NodeId from) = 0;
  // packet overheard in promiscuous mode (unicast MAC-targeted elsewhere)
  virtual void overhear(Simulation& sim, const Packet& pkt, NodeId from, NodeId mac_dst) {
    (void)sim;
    (void)pkt;
    (void)from;
    (void)mac_dst;
  }
  // a unicast exhausted its retries; pkt is the undelivered packet
  virtual void link_failed(Simulation& sim, NodeId dead_next_hop, Packet&& pkt) = 0;
  virtual void timer(Simulation& sim, int timer_id, std::uint64_t aux) = 0;
};

/* Deterministic discrete-event engine. Owns the clock, the radio with its
 * collision and retry semantics, mobility, CBR traffic, labeled PRNG streams
 * and the metric counters. */
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        profile_(make_profile(cfg.protocol, cfg.variant)),
        mobility_(cfg.mobility, cfg.node_count, RngStream(cfg.seed, "mobility")) {
    cfg_.validate();
    alive_.assign(cfg_.node_count, true);
    tx_busy_.assign(cfg_.node_count, 0.0);
    pending_rx_.resize(cfg_.node_count);
  }

  /* protocols must be attached before run(); exactly node_count instances */
  void attach(std::vector<std::unique_ptr<RoutingProtocol>> protocols) {
    if (static_cast<int>(protocols.size()) != cfg_.node_count)
      throw std::logic_error("simulation: need one protocol instance per node");
    protocols_ = std::move(protocols);
  }

  void run() {
    if (protocols_.empty()) throw std::logic_error("simulation: no protocols attached");
    for (NodeId n = 0; n < cfg_.node_count; ++n) protocols_[n]->start(*this, n);
    init_mobility_events();
    init_traffic();
    while (!queue_.empty()) {
      Event e = queue_.pop();
      if (e.fire_time > cfg_.sim_time) break;
      now_ = e.fire_time;
      dispatch(e);
    }
    now_ = cfg_.sim_time;
  }

  // ---- clock and environment ----
  double now() const { return now_; }
  double warmup() const { return cfg_.warmup; }
  double end_time() const { return cfg_.sim_time; }
  int node_count() const { return cfg_.node_count; }
  const ScenarioConfig& config() const { return cfg_; }
  const ProtocolProfile& profile() const { return profile_; }
  const RadioModel& radio() const { return cfg_.radio; }
  Mobility& mobility() { return mobility_; }
  double distance(NodeId a, NodeId b) const { return mobility_.distance(a, b, now_); }

  bool alive(NodeId n) const { return alive_[n]; }
  void kill_node(NodeId n) { alive_[n] = false; }

  RngStream& rng(const std::string& label) {
    auto it = streams_.find(label);
    if (it == streams_.end())
      it = streams_.emplace(label, RngStream(cfg_.seed, label)).first;
    return it->second;
  }

  std::uint64_t next_uid() { return ++uid_counter_; }

  // ---- transmission ----
  void send_broadcast(NodeId from, Packet pkt) { transmit(from, std::move(pkt), -1, 0); }

  /* jittered broadcast, used by flood re-forwarding to avoid synchronized
   * collisions */
  void send_broadcast_delayed(NodeId from, Packet pkt, double delay) {
    std::uint64_t id = ++deferred_counter_;
    deferred_tx_.emplace(id, std::move(pkt));
    Event e;
    e.fire_time = now_ + delay;
    e.kind = EventKind::deferred_broadcast;
    e.node = from;
    e.aux = id;
    queue_.schedule(e, now_);
  }

  void send_unicast(NodeId from, NodeId next_hop, Packet pkt) {
    if (next_hop < 0 || next_hop >= cfg_.node_count || next_hop == from)
      throw std::logic_error("simulation: bad unicast next hop");
    std::uint64_t id = ++unicast_counter_;
    PendingUnicast pu;
    pu.sender = from;
    pu.next_hop = next_hop;
    pu.pkt = std::move(pkt);
    pu.attempts = 1;
    pu.first_time = now_;
    Packet copy = pu.pkt;
    pending_unicast_.emplace(id, std::move(pu));
    double tx_start = transmit(from, std::move(copy), next_hop, id);
    Event e;
    // same fire time as the attempt's own arrival; FIFO ordering makes the
    // arrival (scheduled first) resolve before the outcome is judged
    e.fire_time = tx_start + cfg_.radio.per_hop_latency;
    e.kind = EventKind::unicast_outcome;
    e.node = from;
    e.aux = id;
    queue_.schedule(e, now_);
  }

  // ---- protocol timers ----
  EventHandle schedule_timer(NodeId node, double delay, int timer_id, std::uint64_t aux = 0) {
    Event e;
    e.fire_time = now_ + delay;
    e.kind = EventKind::timer;
    e.node = node;
    e.timer_id = timer_id;
    e.aux = aux;
    return queue_.schedule(e, now_);
  }

  void cancel_timer(const EventHandle& h) { queue_.cancel(h); }

  // ---- metric hooks ----
  void note_data_originated(const Packet& pkt) {
    registry_[pkt.uid] = PacketState::in_flight;
    ++metrics_.data_sent;
  }

  void note_data_delivered(const Packet& pkt) {
    auto it = registry_.find(pkt.uid);
    if (it == registry_.end() || it->second != PacketState::in_flight) return;
    it->second = PacketState::delivered;
    ++metrics_.data_delivered;
    metrics_.delay_sum += now_ - pkt.origin_time;
    if (record_delays_) metrics_.delays.push_back(now_ - pkt.origin_time);
  }

  void note_data_dropped(const Packet& pkt, DropReason reason) {
    auto it = registry_.find(pkt.uid);
    if (it == registry_.end() || it->second != PacketState::in_flight) return;
    it->second = PacketState::dropped;
    ++metrics_.data_dropped;
    ++metrics_.drops_by_reason[static_cast<std::size_t>(reason)];
  }

  void record_delays(bool on) { record_delays_ = on; }

  MetricsReport metrics() const {
    MetricsReport m = metrics_;
    std::uint64_t in_flight = 0;
    for (const auto& [uid, st] : registry_)
      if (st == PacketState::in_flight) ++in_flight;
    m.data_in_flight = in_flight;
    m.finalize();
    return m;
  }

 private:
  enum class PacketState { in_flight, delivered, dropped };

  struct PendingRx {
    double arrival;
    std::uint64_t id;
  };

  struct RxRecord {
    std::shared_ptr<const Packet> pkt;
    NodeId from;
    NodeId mac_dst;
    std::uint64_t unicast_id;
    bool lost = false;
  };

  struct PendingUnicast {
    NodeId sender;
    NodeId next_hop;
    Packet pkt;
    int attempts = 0;
    double first_time = 0.0;
    bool delivered = false;
  };

  /* One physical transmission: fan out receptions to every in-range node,
   * marking collisions against receptions still pending at each receiver.
   * The sender's half-duplex transmitter pushes the start past any frame it
   * is already occupied with. Returns the transmission start time. Every
   * control transmission on or after warm-up bumps the control counter. */
  double transmit(NodeId from, Packet pkt_in, NodeId mac_dst, std::uint64_t unicast_id) {
    if (!alive_[from]) return now_;
    const double tx_start = std::max(now_, tx_busy_[from]);
    tx_busy_[from] = tx_start + cfg_.radio.tx_serialize;
    if (is_control(pkt_in.kind) && tx_start >= cfg_.warmup) ++metrics_.control_tx;
    auto pkt = std::make_shared<const Packet>(std::move(pkt_in));
    const double arrival = tx_start + cfg_.radio.per_hop_latency;
    for (NodeId m = 0; m < cfg_.node_count; ++m) {
      if (m == from || !alive_[m]) continue;
      if (mobility_.distance(from, m, tx_start) > cfg_.radio.range) continue;
      bool lost = false;
      if (cfg_.radio.loss_prob > 0.0 && rng("mac").uniform() < cfg_.radio.loss_prob)
        lost = true;
      std::uint64_t id = ++rx_counter_;
      RxRecord rec{pkt, from, mac_dst, unicast_id, lost};
      // receptions overlapping strictly inside the collision window destroy
      // each other; frames touching exactly at the window boundary coexist.
      // Arrival times accumulate latency sums along different event paths,
      // so spacings that are equal on paper land a few ulp apart; the 1 ns
      // guard keeps exact-boundary frames from flipping on rounding noise.
      const double overlap = cfg_.radio.collision_window - 1e-9;
      for (PendingRx& p : pending_rx_[m]) {
        if (std::fabs(p.arrival - arrival) < overlap) {
          rx_records_[p.id].lost = true;
          rec.lost = true;
        }
      }
      rx_records_.emplace(id, std::move(rec));
      pending_rx_[m].push_back(PendingRx{arrival, id});
      Event e;
      e.fire_time = arrival;
      e.kind = EventKind::packet_arrival;
      e.node = m;
      e.from = from;
      e.aux = id;
      queue_.schedule(e, now_);
    }
    return tx_start;
  }

  void init_mobility_events() {
    for (NodeId n = 0; n < cfg_.node_count; ++n) schedule_mobility(n);
  }

  void schedule_mobility(NodeId n) {
    double t = mobility_.next_change(n);
    if (!std::isfinite(t) || t > cfg_.sim_time) return;
    Event e;
    e.fire_time = t;
    e.kind = EventKind::mobility_update;
    e.node = n;
    queue_.schedule(e, now_);
  }

  /* CBR pairs: with 2k <= n all endpoints are distinct; otherwise the k
   * sources are distinct and each destination is drawn away from its source */
  void init_traffic() {
    if (cfg_.node_count < 2 || cfg_.cbr_sources == 0) return;
    RngStream& tr = rng("traffic");
    const int n = cfg_.node_count;
    const int k = std::min(cfg_.cbr_sources, n);
    std::vector<NodeId> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    // partial Fisher-Yates, enough prefix for sources (and dests if they fit)
    const int need = std::min(2 * k <= n ? 2 * k : k, n);
    for (int i = 0; i < need; ++i) {
      int j = i + static_cast<int>(tr.uniform_int(static_cast<std::uint64_t>(n - i)));
      std::swap(ids[i], ids[j]);
    }
    sources_.clear();
    for (int i = 0; i < k; ++i) {
      NodeId src = ids[i];
      NodeId dst;
      if (2 * k <= n) {
        dst = ids[k + i];
      } else {
        do {
          dst = static_cast<NodeId>(tr.uniform_int(static_cast<std::uint64_t>(n)));
        } while (dst == src);
      }
      sources_.push_back(TrafficSource{src, dst, 0.0});
    }
    const double interval = 1.0 / cfg_.cbr_rate;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      sources_[i].next_time = cfg_.warmup + tr.uniform() * interval;
      Event e;
      e.fire_time = sources_[i].next_time;
      e.kind = EventKind::traffic_generation;
      e.node = static_cast<int>(i);
      queue_.schedule(e, now_);
    }
  }

  void dispatch(const Event& e) {
    switch (e.kind) {
      case EventKind::packet_arrival: on_arrival(e); break;
      case EventKind::unicast_outcome: on_unicast_outcome(e); break;
      case EventKind::unicast_retry: on_unicast_retry(e); break;
      case EventKind::link_fail: on_link_fail(e); break;
      case EventKind::deferred_broadcast: on_deferred(e); break;
      case EventKind::timer:
        if (alive_[e.node]) protocols_[e.node]->timer(*this, e.timer_id, e.aux);
        break;
      case EventKind::mobility_update:
        mobility_.apply_change(e.node, e.fire_time);
        schedule_mobility(e.node);
        break;
      case EventKind::traffic_generation: on_traffic(e); break;
    }
  }

  void on_arrival(const Event& e) {
    auto it = rx_records_.find(e.aux);
    if (it == rx_records_.end()) return;
    RxRecord rec = std::move(it->second);
    rx_records_.erase(it);
    auto& pend = pending_rx_[e.node];
    for (std::size_t i = 0; i < pend.size(); ++i) {
      if (pend[i].id == e.aux) {
        pend.erase(pend.begin() + i);
        break;
      }
    }
    if (rec.lost || !alive_[e.node]) return;
    if (rec.unicast_id != 0 && rec.mac_dst == e.node) {
      auto pu = pending_unicast_.find(rec.unicast_id);
      if (pu != pending_unicast_.end()) pu->second.delivered = true;
    }
    if (rec.mac_dst == -1 || rec.mac_dst == e.node) {
      protocols_[e.node]->handle(*this, Packet(*rec.pkt), rec.from);
    } else {
      protocols_[e.node]->overhear(*this, *rec.pkt, rec.from, rec.mac_dst);
    }
  }

  void on_unicast_outcome(const Event& e) {
    auto it = pending_unicast_.find(e.aux);
    if (it == pending_unicast_.end()) return;
    PendingUnicast& pu = it->second;
    if (pu.delivered) {
      pending_unicast_.erase(it);
      return;
    }
    if (pu.attempts < cfg_.radio.retry_limit && alive_[pu.sender]) {
      Event r;
      // randomized backoff: retries of two colliding senders must not stay
      // phase-locked, or they would destroy each other on every attempt
      r.fire_time =
          now_ + cfg_.radio.retry_backoff * (0.75 + 0.5 * rng("backoff").uniform());
      r.kind = EventKind::unicast_retry;
      r.node = pu.sender;
      r.aux = e.aux;
      queue_.schedule(r, now_);
      return;
    }
    // out of retries: hand the failure to the sender's protocol, with the
    // protocol-specific MAC notification delay (DSDV hears late)
    double notify_at = now_;
    if (profile_.protocol == Protocol::dsdv)
      notify_at = std::max(now_, pu.first_time + profile_.trig_notify);
    Event f;
    f.fire_time = notify_at;
    f.kind = EventKind::link_fail;
    f.node = pu.sender;
    f.aux = e.aux;
    queue_.schedule(f, now_);
  }

  void on_unicast_retry(const Event& e) {
    auto it = pending_unicast_.find(e.aux);
    if (it == pending_unicast_.end()) return;
    PendingUnicast& pu = it->second;
    if (!alive_[pu.sender]) {
      finish_failed_unicast(e.aux, false);
      return;
    }
    ++pu.attempts;
    double tx_start = transmit(pu.sender, Packet(pu.pkt), pu.next_hop, e.aux);
    Event o;
    o.fire_time = tx_start + cfg_.radio.per_hop_latency;
    o.kind = EventKind::unicast_outcome;
    o.node = pu.sender;
    o.aux = e.aux;
    queue_.schedule(o, now_);
  }

  void on_link_fail(const Event& e) { finish_failed_unicast(e.aux, true); }

  void finish_failed_unicast(std::uint64_t id, bool callback) {
    auto it = pending_unicast_.find(id);
    if (it == pending_unicast_.end()) return;
    PendingUnicast pu = std::move(it->second);
    pending_unicast_.erase(it);
    if (callback && alive_[pu.sender]) {
      protocols_[pu.sender]->link_failed(*this, pu.next_hop, std::move(pu.pkt));
    } else if (pu.pkt.kind == PacketKind::data) {
      note_data_dropped(pu.pkt, DropReason::node_dead);
    }
  }

  void on_deferred(const Event& e) {
    auto it = deferred_tx_.find(e.aux);
    if (it == deferred_tx_.end()) return;
    Packet pkt = std::move(it->second);
    deferred_tx_.erase(it);
    transmit(e.node, std::move(pkt), -1, 0);
  }

  void on_traffic(const Event& e) {
    TrafficSource& s = sources_[e.node];
    if (now_ > cfg_.sim_time - 1.0) return;  // stop margin before end time
    if (alive_[s.src] && alive_[s.dst]) {
      Packet pkt;
      pkt.uid = next_uid();
      pkt.kind = PacketKind::data;
      pkt.src = s.src;
      pkt.dst = s.dst;
      pkt.origin_time = now_;
      pkt.ttl = cfg_.node_count - 1;
      pkt.size = cfg_.packet_size;
      note_data_originated(pkt);
      protocols_[s.src]->originate(*this, std::move(pkt));
    }
    Event n;
    n.fire_time = now_ + 1.0 / cfg_.cbr_rate;
    n.kind = EventKind::traffic_generation;
    n.node = e.node;
    queue_.schedule(n, now_);
  }

  struct TrafficSource {
    NodeId src;
    NodeId dst;
    double next_time;
  };

  ScenarioConfig cfg_;
  ProtocolProfile profile_;
  Mobility mobility_;
  std::vector<std::unique_ptr<RoutingProtocol>> protocols_;
  EventQueue queue_;
  double now_ = 0.0;

  std::vector<bool> alive_;
  std::vector<double> tx_busy_;  // per-node transmitter occupied until
  std::map<std::string, RngStream> streams_;
  std::vector<TrafficSource> sources_;

  std::vector<std::vector<PendingRx>> pending_rx_;
  std::unordered_map<std::uint64_t, RxRecord> rx_records_;
  std::unordered_map<std::uint64_t, PendingUnicast> pending_unicast_;
  std::unordered_map<std::uint64_t, Packet> deferred_tx_;
  std::unordered_map<std::uint64_t, PacketState> registry_;

  std::uint64_t uid_counter_ = 0;
  std::uint64_t rx_counter_ = 0;
  std::uint64_t unicast_counter_ = 0;
  std::uint64_t deferred_counter_ = 0;

  MetricsReport metrics_;
  bool record_delays_ = false;
};

}  // namespace adhoclab::sim
