#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace adhoclab {

enum class DropReason {
  no_route,
  buffer_overflow,
  buffer_timeout,
  discovery_failed,
  ttl_expired,
  link_failed,
  salvage_exhausted,
  holdoff,
  node_dead,
  count_  // sentinel
};

struct MetricsReport {
  std::uint64_t data_sent = 0;
  std::uint64_t data_delivered = 0;
  std::uint64_t data_dropped = 0;
  std::uint64_t data_in_flight = 0;  // still buffered or airborne at end time
  std::uint64_t control_tx = 0;      // per-hop control transmissions
  double delay_sum = 0.0;
  std::vector<double> delays;        // per-packet, filled when requested
  std::array<std::uint64_t, static_cast<std::size_t>(DropReason::count_)> drops_by_reason{};

  // derived
  double pdr = 0.0;
  std::optional<double> ae2ed;
  std::optional<double> nro;

  void finalize() {
    pdr = data_sent ? static_cast<double>(data_delivered) / static_cast<double>(data_sent) : 0.0;
    if (data_delivered) {
      ae2ed = delay_sum / static_cast<double>(data_delivered);
      nro = static_cast<double>(control_tx) / static_cast<double>(data_delivered);
    } else {
      ae2ed.reset();
      nro.reset();
    }
  }

  bool conserved() const {
    return data_sent == data_delivered + data_dropped + data_in_flight;
  }
};

}  // namespace adhoclab
