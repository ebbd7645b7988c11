#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace adhoclab::sim {

using NodeId = int;

enum class PacketKind { data, rreq, rrep, rerr, dsdv_update, hello };

inline bool is_control(PacketKind k) { return k != PacketKind::data; }

/* One routing-table advert inside a DSDV update packet. */
struct DsdvAdvert {
  NodeId dest = -1;
  int metric = 0;
  std::uint32_t seq_no = 0;
};

/* One unreachable destination inside a route-error packet. */
struct RerrEntry {
  NodeId dest = -1;
  std::uint32_t seq_no = 0;
};

struct Packet {
  std::uint64_t uid = 0;
  PacketKind kind = PacketKind::data;
  NodeId src = -1;  // origin of the flow (data) or of the control exchange
  NodeId dst = -1;  // final destination / discovery target
  double origin_time = 0.0;
  int hop_count = 0;
  int ttl = 0;
  int size = 0;  // bytes

  // source route / accumulated route record, DSR and RREP paths
  std::vector<NodeId> route;

  std::uint32_t seq_no = 0;   // originator or target sequence number
  std::uint32_t req_id = 0;   // discovery round id (DSR duplicate filter)
  int salvage_count = 0;      // DSR: times this packet was salvaged

  std::vector<DsdvAdvert> adverts;     // dsdv_update payload
  std::vector<RerrEntry> unreachable;  // rerr payload
  NodeId broken_from = -1;             // rerr: upstream end of the dead link
  NodeId broken_to = -1;               // rerr: dead next hop
};

}  // namespace adhoclab::sim
