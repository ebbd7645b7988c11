#pragma once

#include <stdexcept>
#include <string>

namespace adhoclab::sim {

enum class Protocol { dsdv, dsr, dymo };
enum class Variant { def, mod };

/* Tunables for one protocol under one profile. Fields irrelevant to a
 * protocol keep their defaults and are ignored by it. */
struct ProtocolProfile {
  Protocol protocol = Protocol::dsdv;
  Variant variant = Variant::def;

  // DSR
  int send_buf_size = 64;
  int tap_cache_size = 1024;
  int discovery_cache_size = 64;  // plumbing bound on discovery-learned paths
  double discovery_backoff = 0.5; // doubles per retry, capped below
  double discovery_backoff_cap = 10.0;

  // DYMO
  int ttl_net_diameter = 10;
  double rreq_wait_time = 1.0;
  double hello_interval = 1.0;
  int terminal_retries = 2;       // extra network-wide rings after the cap
  double giveup_holdoff = 5.0;    // no re-discovery for a dest this soon after giving up

  // DSDV
  double periodic_update = 15.0;
  double trig_notify = 0.8;       // MAC breakage notification delay
  double settling_time = 2.0;

  // shared
  double buffer_lifetime = 30.0;  // send-buffer entry lifetime (DSR, DYMO)
  double route_lifetime = 5.0;    // DYMO table entry lifetime
  double forward_jitter = 0.01;   // broadcast re-forward jitter upper bound

  void validate() const {
    if (send_buf_size <= 0 || tap_cache_size <= 0 || discovery_cache_size <= 0)
      throw std::domain_error("profile: cache/buffer sizes must be positive");
    if (ttl_net_diameter <= 0) throw std::domain_error("profile: ttl_net_diameter must be > 0");
    if (!(rreq_wait_time > 0.0) || !(hello_interval > 0.0) || !(periodic_update > 0.0) ||
        !(trig_notify > 0.0) || !(settling_time > 0.0) || !(buffer_lifetime > 0.0) ||
        !(route_lifetime > 0.0))
      throw std::domain_error("profile: intervals must be positive");
  }
};

inline ProtocolProfile make_profile(Protocol p, Variant v) {
  ProtocolProfile prof;
  prof.protocol = p;
  prof.variant = v;
  if (p == Protocol::dsr && v == Variant::mod) {
    prof.send_buf_size = 128;   // doubled
    prof.tap_cache_size = 256;  // quartered
  }
  if (p == Protocol::dymo && v == Variant::mod) {
    prof.ttl_net_diameter = 30;
    prof.rreq_wait_time = 0.6;
  }
  return prof;
}

inline std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::dsdv: return "dsdv";
    case Protocol::dsr: return "dsr";
    case Protocol::dymo: return "dymo";
  }
  return "?";
}

inline std::string variant_name(Variant v) {
  return v == Variant::def ? "default" : "modified";
}

}  // namespace adhoclab::sim
