#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adhoclab {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double tail_cutoff_mass = 1e-12;  // envelope threshold for truncating infinite tails

  void validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-3)
      throw std::domain_error("QuadratureSpec: rel_tol must be in (0, 1e-3]");
    if (!(abs_tol > 0.0)) throw std::domain_error("QuadratureSpec: abs_tol must be > 0");
    if (!(tail_cutoff_mass > 0.0))
      throw std::domain_error("QuadratureSpec: tail_cutoff_mass must be > 0");
  }
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double estimate, double achieved_tol)
      : std::runtime_error(what), estimate_(estimate), achieved_tol_(achieved_tol) {}

  double estimate() const noexcept { return estimate_; }
  double achieved_tolerance() const noexcept { return achieved_tol_; }

 private:
  double estimate_;
  double achieved_tol_;
};

namespace detail {

/* 15-point Kronrod extension of 7-point Gauss. Abscissae for the positive
 * half-interval; xgk[1], xgk[3], ... are the Gauss points. */
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

template <class F>
PanelResult gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);

  double resk = 0.0, resg = 0.0, resabs = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double sum = (i == 7) ? fv[7] : fv[i] + fv[14 - i];
    resk += kWgk[i] * sum;
    resabs += kWgk[i] * ((i == 7) ? std::fabs(fv[7]) : std::fabs(fv[i]) + std::fabs(fv[14 - i]));
    if (i % 2 == 1) resg += kWg[i / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fv[7] - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::fabs(fv[i] - reskh) + std::fabs(fv[14 - i] - reskh));

  const double value = resk * h;
  double err = std::fabs((resk - resg) * h);
  const double asc = resasc * std::fabs(h);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  (void)resabs;
  return {value, err};
}

struct Segment {
  double a, b, value, error;
};

template <class F>
double adaptive_finite(F& f, double a, double b, const QuadratureSpec& spec,
                       std::size_t max_segments = 2048) {
  std::vector<Segment> segs;
  auto first = gauss_kronrod_15(f, a, b);
  segs.push_back({a, b, first.value, first.error});

  for (;;) {
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.error;
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
    if (err <= tol) return total;
    if (segs.size() >= max_segments)
      throw NumericError("integrate: subdivision budget exhausted", total, err);

    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].error > segs[worst].error) worst = i;
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b))
      throw NumericError("integrate: interval collapsed below machine resolution", s.value,
                         s.error);
    auto left = gauss_kronrod_15(f, s.a, mid);
    auto right = gauss_kronrod_15(f, mid, s.b);
    segs[worst] = {s.a, mid, left.value, left.error};
    segs.push_back({mid, s.b, right.value, right.error});
  }
}

}  // namespace detail

/* Adaptive Gauss-Kronrod quadrature. `upper` may be +infinity: the integral
 * is then extended over doubling panels until the increment drops below
 * abs_tol and the integrand envelope at the truncation point falls below
 * tail_cutoff_mass. Endpoint values are never evaluated, so integrable
 * endpoint singularities (log-type) are acceptable. */
template <class F>
double integrate(F&& f, double lower, double upper, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (std::isnan(lower) || std::isnan(upper))
    throw std::domain_error("integrate: NaN integration limit");
  if (lower == upper) return 0.0;
  if (std::isinf(lower)) throw std::domain_error("integrate: lower limit must be finite");
  if (!std::isinf(upper)) {
    if (lower > upper) throw std::domain_error("integrate: lower > upper");
    return detail::adaptive_finite(f, lower, upper, spec);
  }

  double horizon = std::max(1.0, 2.0 * std::fabs(lower) + 1.0);
  double total = detail::adaptive_finite(f, lower, lower + horizon, spec);
  double edge = lower + horizon;
  for (int round = 0; round < 64; ++round) {
    const double next = edge + horizon;
    const double inc = detail::adaptive_finite(f, edge, next, spec);
    total += inc;
    edge = next;
    horizon *= 2.0;
    if (std::fabs(inc) <= spec.abs_tol && std::fabs(f(edge)) <= spec.tail_cutoff_mass)
      return total;
  }
  throw NumericError("integrate: tail failed to decay below cutoff", total,
                     std::fabs(f(edge)));
}

}  // namespace adhoclab
