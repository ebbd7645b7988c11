#pragma once

#include <cmath>
#include <stdexcept>

#include "adhoclab/quadrature.hpp"

namespace adhoclab {

/* Inputs of the normalized-routing-overhead formulas. r and s are the
 * measured routing-packet and data-packet totals a deployment reports;
 * h is the hop count of an average route, ttl_ring the TTL of the final
 * expanding-ring-search ring, period_t the observation period. */
struct OverheadParams {
  double sources = 12.0;
  double r = 0.0;        // routing packets
  double s = 1.0;        // generated data packets
  double h = 2.0;        // hop count
  double ttl_ring = 10.0;
  double h_int = 1.0;    // periodic update / hello interval, seconds
  double lb_int = 30.0;  // mean link-breakage interarrival, seconds
  double trig_int = 0.8; // triggered-update notification interval, seconds
  double period_t = 900.0;
  double lambda = 0.00025;  // vehicles per meter

  void validate_counts() const {
    if (sources < 0.0 || r < 0.0 || s < 0.0 || h < 0.0 || ttl_ring < 0.0 ||
        period_t < 0.0 || lambda < 0.0)
      throw std::domain_error("OverheadParams: counts must be >= 0");
  }
};

/* Route-discovery overhead, sources * int_0^ttl lambda e^{lambda h r / s} dh.
 * Closed form sources (s/r) (e^{lambda ttl r / s} - 1); the r -> 0 limit is
 * sources lambda ttl. */
inline double nro_dymo_rd(const OverheadParams& p) {
  p.validate_counts();
  if (!(p.s > 0.0)) throw std::domain_error("nro_dymo_rd: s must be > 0");
  if (p.r == 0.0) return p.sources * p.lambda * p.ttl_ring;
  return p.sources * (p.s / p.r) * std::expm1(p.lambda * p.ttl_ring * p.r / p.s);
}

inline double rerr_pkts(const OverheadParams& p) {
  p.validate_counts();
  if (!(p.lb_int > 0.0)) throw std::domain_error("rerr_pkts: lb_int must be > 0");
  return p.period_t * p.h / p.lb_int;
}

inline double nro_dymo_total(const OverheadParams& p) {
  if (!(p.h_int > 0.0)) throw std::domain_error("nro_dymo_total: h_int must be > 0");
  return nro_dymo_rd(p) + (p.sources / p.s) * (p.period_t * p.h / p.h_int + rerr_pkts(p));
}

/* DSR monitors links at the MAC layer and salvages packets instead of
 * sending maintenance control traffic, so only the discovery term remains. */
inline double nro_dsr_total(const OverheadParams& p) { return nro_dymo_rd(p); }

inline double nro_dsdv_total(const OverheadParams& p) {
  p.validate_counts();
  if (!(p.s > 0.0)) throw std::domain_error("nro_dsdv_total: s must be > 0");
  if (!(p.h_int > 0.0)) throw std::domain_error("nro_dsdv_total: h_int must be > 0");
  if (!(p.trig_int > 0.0)) throw std::domain_error("nro_dsdv_total: trig_int must be > 0");
  return (p.sources / p.s) * (p.period_t * p.h / p.h_int) +
         (p.sources / p.s) * (p.period_t * p.h / p.trig_int);
}

}  // namespace adhoclab
